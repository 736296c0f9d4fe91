import math
from typing import List, Sequence

import numpy as np

from app.common.exceptions import InvalidInputError
from app.common.logger import logger
from app.core.schema import CoarseLabel, Sample

_FLIP = {CoarseLabel.NEGATIVE: CoarseLabel.POSITIVE, CoarseLabel.POSITIVE: CoarseLabel.NEGATIVE}


def flip_count(eta: float, n: int) -> int:
    """round(eta * n), halves rounded up."""
    return int(math.floor(eta * n + 0.5))


def inject_noise(samples: Sequence[Sample], eta: float, seed: int) -> List[Sample]:
    """Flip 0 <-> 1 on exactly round(eta * n) of the n samples labeled 0 or 1.

    The flipped index set depends only on the eligible count and the seed,
    so applying the same call twice restores the original labels.
    """
    if not 0.0 <= eta < 1.0:
        raise InvalidInputError(f"Noise rate must lie in [0, 1), got {eta}")
    eligible = [i for i, s in enumerate(samples) if s.coarse in _FLIP]
    k = flip_count(eta, len(eligible))
    out = list(samples)
    if k == 0:
        return out

    rng = np.random.default_rng(seed)
    for j in rng.choice(len(eligible), size=k, replace=False):
        i = eligible[j]
        out[i] = out[i].model_copy(update={"coarse": _FLIP[out[i].coarse]})
    logger.debug(f"Flipped {k} of {len(eligible)} coarse labels (eta={eta})")
    return out
