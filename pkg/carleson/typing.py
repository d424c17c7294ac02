from typing import TYPE_CHECKING, Protocol, Union


if TYPE_CHECKING:
    from typing import Any, TypeAlias

    import numpy as np

    from django.template import Context
    from numpy.typing import NDArray

    RenderContext: TypeAlias = Union[Context, dict[str, Any]]
    FloatArray: TypeAlias = NDArray[np.float64]
    ComplexArray: TypeAlias = NDArray[np.complex128]
    ArrayOrFloat: TypeAlias = Union[float, NDArray[np.float64]]


class PlaneEvaluator(Protocol):
    """Callable of two coordinate arrays, as used for densities and integrands."""

    def __call__(  # noqa: E704
        self, x: "FloatArray", y: "FloatArray"
    ) -> "FloatArray": ...
