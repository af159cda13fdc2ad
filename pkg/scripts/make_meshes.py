#!/usr/bin/env python3
"""Write the bundled sample meshes (OFF, node/ele, hex ASCII) to a directory."""

import argparse

from arbfscaffold import samples


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="meshes", help="output directory (default: meshes)")
    args = ap.parse_args()
    written = samples.write_sample_meshes(args.out)
    for name in sorted(written):
        print(written[name])


if __name__ == "__main__":
    main()
