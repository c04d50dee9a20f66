from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from qcat.exceptions import Degenerate

DEGENERATE_FLOOR = 10 * float(np.finfo(np.float64).eps)


class RateModel(enum.Enum):
    #: deviation ~ C N^{-c}
    POWER = "power"
    #: deviation ~ C (log N)^{-c}
    INVERSE_LOG = "inverse-log"


@dataclass(frozen=True)
class RateFit:
    model: RateModel
    c: float
    C: float
    #: root mean square residual of the fit in log space
    quality: float
    points_num: int


def rate_fit(
    points: Iterable[tuple[int, float]],
    model: RateModel | str = RateModel.POWER,
) -> RateFit:
    model = RateModel(model)
    data = sorted((int(n), float(dev)) for n, dev in points)
    if len(data) < 3:
        raise ValueError(f"Need at least 3 points to fit a rate, got {len(data)}")

    Ns = np.array([n for n, _ in data], dtype=np.float64)
    devs = np.array([dev for _, dev in data], dtype=np.float64)
    smallest = float(np.min(np.abs(devs)))
    if smallest < DEGENERATE_FLOOR:
        raise Degenerate(smallest)

    match model:
        case RateModel.POWER:
            x = np.log(Ns)
        case RateModel.INVERSE_LOG:
            if np.any(Ns <= 1):
                raise ValueError("inverse-log model needs N > 1")
            x = np.log(np.log(Ns))
        case _:
            assert False

    y = np.log(np.abs(devs))
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    return RateFit(
        model=model,
        c=float(-slope),
        C=float(np.exp(intercept)),
        quality=float(np.sqrt(np.mean(residual**2))),
        points_num=len(data),
    )
