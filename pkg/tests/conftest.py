import numpy as np
import pytest

from magharden.circle import CirclePotential


def random_potential(seed: int, n: int = 256, kmax: int = 4, scale: float = 0.5, qsa: bool | None = None):
    """Band-limited complex potential; ``qsa`` forces <Im a> = 0 (True) or != 0 (False)."""
    rng = np.random.default_rng(seed)
    coeffs = {}
    for k in range(-kmax, kmax + 1):
        coeffs[k] = scale * (rng.normal() + 1j * rng.normal()) / (1 + abs(k))
    if qsa is True:
        coeffs[0] = complex(coeffs[0].real, 0.0)
    elif qsa is False:
        coeffs[0] = complex(coeffs[0].real, 0.2 + abs(coeffs[0].imag))
    return CirclePotential.from_fourier(coeffs, n)


@pytest.fixture
def isin():
    return CirclePotential.from_function(lambda x: 1j * np.sin(x), 64)
