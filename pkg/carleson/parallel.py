import logging

from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, TypeVar

from carleson.conf import get_setting


if TYPE_CHECKING:
    from typing import Callable, Iterable, Optional


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(
    func: "Callable[[T], R]", items: "Iterable[T]", threads: "Optional[int]" = None
) -> "list[R]":
    """Map ``func`` over ``items`` on a thread pool, keeping input order."""
    threads = int(get_setting("THREADS") if threads is None else threads)
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug("mapping %d items on %d threads", len(items), threads)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))
