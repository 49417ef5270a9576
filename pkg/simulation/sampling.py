from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ShotEstimate:
    """Sample mean of a +/-1 observable; shots == 0 marks an exact (unsampled) mean."""
    mean: float
    variance: float
    shots: int

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError(f"negative variance {self.variance}")
        if self.shots < 0:
            raise ValueError(f"negative shot count {self.shots}")


def exact_estimate(true_exp: float) -> ShotEstimate:
    return ShotEstimate(float(true_exp), 0.0, 0)


def sample_estimate(true_exp: float, M: int, seed: int) -> ShotEstimate:
    """Draw M +/-1 outcomes with P(+1) = (1 + true_exp)/2; variance is that of the mean."""
    if M < 1:
        raise ValueError(f"need at least one shot, got {M}")
    p_plus = float(np.clip((1 + true_exp) / 2, 0.0, 1.0))
    rng = np.random.default_rng(seed)
    plus = int(rng.binomial(M, p_plus))
    mean = (2 * plus - M) / M
    return ShotEstimate(mean, (1 - mean**2) / M, M)


def derived_seeds(seed: int, count: int) -> list[int]:
    """Independent child seeds, stable for a given (seed, count)."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]
