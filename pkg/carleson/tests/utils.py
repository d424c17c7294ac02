"""Utilities for tests in the `carleson` package."""

import math

from typing import TYPE_CHECKING


if TYPE_CHECKING:
    from typing import Optional


class NumericAssertionMixin:
    def assertClose(
        self,
        first: float,
        second: float,
        rel: float = 1e-9,
        abs: float = 0.0,
        msg: "Optional[str]" = None,
    ) -> None:
        """
        Assert that two floats agree to a relative or an absolute tolerance.

        `assertAlmostEqual` only knows about decimal places, which is useless for
        values spread over many orders of magnitude as they are here.

        Parameters
        ----------
        first : float
            Computed value.
        second : float
            Expected value.
        rel : float
            Relative tolerance, measured against the larger magnitude.
        abs : float
            Absolute tolerance, for expected values at or near zero.
        msg : str, optional
            Message shown on failure.

        """
        if not math.isclose(first, second, rel_tol=rel, abs_tol=abs):
            standard = f"{first!r} != {second!r} (rel={rel:g}, abs={abs:g})"
            self.fail(msg or standard)  # type: ignore[attr-defined]
