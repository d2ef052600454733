"""Write a folder of synthetic blob images (yes/ and no/) for smoke runs."""
import argparse

from tumordetect.synthetic import write_blob_dataset


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("root")
    p.add_argument("--tumor", type=int, default=100)
    p.add_argument("--healthy", type=int, default=100)
    p.add_argument("--side", type=int, default=300)
    p.add_argument("--seed", type=int, default=2024)
    args = p.parse_args()
    yes, no = write_blob_dataset(args.root, args.tumor, args.healthy, args.side, args.seed)
    print(f"wrote {args.tumor} images to {yes} and {args.healthy} to {no}")


if __name__ == "__main__":
    main()
