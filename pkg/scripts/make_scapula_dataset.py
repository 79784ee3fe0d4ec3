"""Regenerate the bundled synthetic scapula pose file from qrbf.datasets."""

import argparse
import json
from pathlib import Path

from qrbf.datasets import BUNDLED_FILE, pose_names, scapula_pose_set
from qrbf.io import pose_set_to_dict

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "qrbf" / "data" / BUNDLED_FILE


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-o", "--output", type=Path, default=DEFAULT_OUT)
    args = parser.parse_args()
    doc = pose_set_to_dict(scapula_pose_set())
    doc["pose_names"] = pose_names()
    args.output.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {len(doc['keys'])} poses to {args.output}")


if __name__ == "__main__":
    main()
