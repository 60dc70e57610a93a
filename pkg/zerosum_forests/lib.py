import hashlib
import sys
from typing import Literal

from loguru import logger

MASK64 = (1 << 64) - 1


def log(
    action: Literal["GENERATE", "SOLVE", "WALK", "CHECK", "VERIFY", "SWEEP"],
    subject: str,
    detail,
    success: bool = True,
):
    message = "| Action={} | Subject={} | Detail={}"
    if success:
        logger.info(message, action, subject, str(detail))
    else:
        logger.error(message, action, subject, str(detail))


def set_logging(disable_log: bool, level: str = "INFO"):
    if disable_log:
        logger.disable("zerosum_forests")
        return

    logger.enable("zerosum_forests")
    if not logger._core.handlers:  # pyright: ignore
        logger.add(sys.stderr, level=level)


def derive_seed(seed: int, *labels: object) -> int:
    """Derive a 64-bit sub-seed from a master seed and fixed labels.

    Args:
        seed: Master seed given on the command line
        labels: Stream labels, e.g. ("restart", 3) or ("sample", 17)

    Returns:
        Unsigned 64-bit integer, stable across runs and platforms
    """
    text = ":".join([str(seed & MASK64), *(str(label) for label in labels)])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


if __name__ == "__main__":
    set_logging(False)
    log(action="GENERATE", subject="n=8", detail="seed=42")
    log(action="SOLVE", subject="factor k=3", detail="weight=2", success=False)
