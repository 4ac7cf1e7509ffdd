#!/usr/bin/env python3
# Copyright 2026 The edgeforge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates data/desk_corpus from photos shipped with scikit-learn and
scikit-image. See data/desk_corpus/ATTRIBUTION.md for licenses."""

import argparse
import pathlib

from PIL import Image
import sklearn.datasets
import skimage.data

# (output name, source, crop box as left, top, right, bottom or None)
CROPS = [
    ("tower_full.png", "china", None),
    ("tower_facade.png", "china", (60, 20, 370, 427)),
    ("tower_upper_storey.png", "china", (80, 120, 335, 245)),
    ("tower_lower_storey.png", "china", (60, 230, 360, 365)),
    ("tower_roofline.png", "china", (85, 20, 330, 145)),
    ("brick_wall.png", "brick", None),
]


def load(source):
    if source == "china":
        return Image.fromarray(sklearn.datasets.load_sample_image("china.jpg"))
    if source == "brick":
        return Image.fromarray(skimage.data.brick())
    raise ValueError(source)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path,
                        default=pathlib.Path(__file__).resolve().parent.parent / "data" / "desk_corpus")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, source, box in CROPS:
        img = load(source)
        if box is not None:
            img = img.crop(box)
        img.convert("L").save(args.out / name, optimize=True)
        print(args.out / name, img.size)


if __name__ == "__main__":
    main()
