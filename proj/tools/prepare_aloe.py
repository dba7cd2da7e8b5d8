#!/usr/bin/env python3
"""Cut the Middlebury Aloe pair into 384x384 RGB-D tiles (P6 + P5) plus a manifest."""
import argparse
import json
from pathlib import Path

import numpy as np
from PIL import Image

TILE = 384


def fill_holes(disp):
    out = disp.astype(np.int32)
    for r in range(out.shape[0]):
        row = out[r]
        valid = np.flatnonzero(row > 0)
        if valid.size == 0:
            continue
        for c in np.flatnonzero(row == 0):
            k = np.searchsorted(valid, c)
            cand = [row[valid[i]] for i in (k - 1, k) if 0 <= i < valid.size]
            row[c] = min(cand)
    return out.astype(np.uint8)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--src", type=Path, default=Path(__file__).resolve().parent.parent / "testdata/aloe/source")
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "testdata/aloe")
    args = ap.parse_args()

    rgb = np.asarray(Image.open(args.src / "aloeL.jpg").convert("RGB"))
    disp = fill_holes(np.asarray(Image.open(args.src / "aloeGT.png").convert("L")))
    if rgb.shape[:2] != disp.shape:
        raise SystemExit("rgb and disparity sizes differ")

    entries = []
    for i, r0 in enumerate((0, TILE)):
        for j, c0 in enumerate((0, TILE, 2 * TILE)):
            tid = f"aloe_r{i}c{j}"
            Image.fromarray(rgb[r0:r0 + TILE, c0:c0 + TILE]).save(args.out / f"{tid}.ppm")
            Image.fromarray(disp[r0:r0 + TILE, c0:c0 + TILE]).save(args.out / f"{tid}.pgm")
            entries.append({"id": tid, "rgb_path": f"{tid}.ppm", "depth_path": f"{tid}.pgm",
                            "depth_unit_scale": 255.0, "split": "train"})
    manifest = {"name": "middlebury_aloe", "entries": entries}
    (args.out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
