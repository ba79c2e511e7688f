"""Image file I/O and the distorted-file naming scheme."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image

SUPPORTED_SUFFIXES = (".png", ".jpg", ".jpeg")


def load_image(path: str | Path) -> np.ndarray:
    """Decode a PNG or JPEG file to an (H, W, 3) uint8 array."""
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def save_png(img: np.ndarray, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(img, mode="RGB").save(path, format="PNG")


def png_bytes(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def decode_image_bytes(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def iter_image_files(path: str | Path) -> list[Path]:
    """A file path as-is, or the sorted image files directly in a directory."""
    p = Path(path)
    if p.is_dir():
        return sorted(
            f for f in p.iterdir()
            if f.is_file() and f.suffix.lower() in SUPPORTED_SUFFIXES
        )
    return [p]


def distorted_name(stem: str, variant: str, degree: int) -> str:
    """File stem for a distorted image: <stem>__<variant>__d<degree>."""
    return f"{stem}__{variant}__d{degree}"


def distorted_path(root: str | Path, image_id: str, variant: str,
                   degree: int) -> Path:
    return Path(root) / f"{distorted_name(image_id, variant, degree)}.png"
