"""Write the sample images used by the tests and the prior training run.

Test images are 128x128 crops of 2x area-downsampled skimage samples; the
prior is trained on a disjoint set of textures, also downsampled by 2.
"""
import pathlib

import numpy as np
import skimage.data
from skimage.io import imsave
from skimage.transform import downscale_local_mean

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "images"
TEST = ["camera", "astronaut", "coffee", "chelsea", "rocket"]
TRAIN = ["brick", "grass", "gravel", "coins", "moon", "text", "page", "clock",
         "immunohistochemistry"]


def half(img):
    img = img.astype(np.float64)
    factors = (2, 2) if img.ndim == 2 else (2, 2, 1)
    return downscale_local_mean(img, factors)


def to_u8(img):
    return np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)


def main():
    (OUT / "test").mkdir(parents=True, exist_ok=True)
    (OUT / "train").mkdir(parents=True, exist_ok=True)
    for name in TEST:
        img = half(getattr(skimage.data, name)())
        h, w = img.shape[:2]
        y0, x0 = (h - 128) // 2, (w - 128) // 2
        imsave(OUT / "test" / f"{name}.png", to_u8(img[y0:y0 + 128, x0:x0 + 128]), check_contrast=False)
    for name in TRAIN:
        imsave(OUT / "train" / f"{name}.png", to_u8(half(getattr(skimage.data, name)())), check_contrast=False)


if __name__ == "__main__":
    main()
