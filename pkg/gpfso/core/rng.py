"""
Deterministic random number streams.

An RngStream wraps a numpy Generator driven by the counter-based Philox bit
generator. The same seed and the same sequence of calls always produce the
same draws, and `fork` derives independent child streams (one per particle,
per replication or per purpose) without touching the parent's state.
"""

from typing import List, Optional, Tuple, Union

import numpy as np

Size = Optional[Union[int, Tuple[int, ...]]]


class RngStream:
    """Seeded pseudo-random stream with deterministic forking."""

    def __init__(self, seed: Union[int, np.random.SeedSequence] = 0):
        """
        Create a stream.

        Args:
            seed (Union[int, SeedSequence]): 64-bit unsigned seed, or a seed
                sequence obtained from another stream's fork.
        """
        if isinstance(seed, np.random.SeedSequence):
            self._seed_seq = seed
        else:
            if seed < 0 or seed >= 2**64:
                raise ValueError("seed must be a 64-bit unsigned integer")
            self._seed_seq = np.random.SeedSequence(int(seed))
        self._gen = np.random.Generator(np.random.Philox(self._seed_seq))

    @property
    def generator(self) -> np.random.Generator:
        """The underlying numpy Generator (for scipy `random_state=` arguments)."""
        return self._gen

    def fork(self, n: int) -> List["RngStream"]:
        """
        Derive `n` independent child streams.

        Children depend only on this stream's seed and on how many forks were
        requested before, never on draws made from the parent.

        Args:
            n (int): Number of child streams.

        Returns:
            List[RngStream]: The children, in a fixed order.
        """
        return [RngStream(child) for child in self._seed_seq.spawn(n)]

    def normal(self, size: Size = None) -> np.ndarray:
        return self._gen.standard_normal(size)

    def uniform(self, size: Size = None) -> np.ndarray:
        return self._gen.random(size)

    def chisquare(self, df: float, size: Size = None) -> np.ndarray:
        return self._gen.chisquare(df, size)

    def gamma(self, shape: float, scale: float = 1.0, size: Size = None) -> np.ndarray:
        return self._gen.gamma(shape, scale, size)

    def exponential(self, size: Size = None) -> np.ndarray:
        return self._gen.standard_exponential(size)

    def integers(self, high: int, size: Size = None) -> np.ndarray:
        return self._gen.integers(0, high, size)

    def student_t(self, nu: float, n: int, dim: int) -> np.ndarray:
        """
        Draw `n` standard multivariate Student-t vectors in R^dim.

        Each row is z * sqrt(nu / chi2_nu) with z ~ N(0, I) and one chi-square
        draw per row, which is the exact multivariate t_{dim, nu}(0, I) law.

        Args:
            nu (float): Degrees of freedom, > 0 (non-integer allowed).
            n (int): Number of draws.
            dim (int): Dimension.

        Returns:
            np.ndarray: Array of shape (n, dim).
        """
        z = self._gen.standard_normal((n, dim))
        chi2 = self._gen.chisquare(nu, n)
        return z * np.sqrt(nu / chi2)[:, None]
