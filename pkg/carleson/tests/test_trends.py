import threading

import numpy as np

from django.test import SimpleTestCase, override_settings

from carleson.conf import get_setting
from carleson.exceptions import InvalidInput, InvalidParameter
from carleson.grids import HalfPlaneGrid, ProbeFamily, ScanGrid, lambda_grid
from carleson.parallel import ordered_map
from carleson.trends import (
    BOUNDED,
    INCONCLUSIVE,
    UNBOUNDED_TREND,
    classify_trend,
    end_behaviours,
    unbounded_direction,
)


class TestClassifyTrend(SimpleTestCase):
    def setUp(self) -> None:
        self.params = np.geomspace(1e-4, 1e4, 17)

    def test_flat_family(self) -> None:
        self.assertEqual(classify_trend(self.params, np.ones(17)), (BOUNDED, None))

    def test_growth_towards_small_parameters(self) -> None:
        verdict, end = classify_trend(self.params, self.params**-0.5)
        self.assertEqual((verdict, end), (UNBOUNDED_TREND, "low"))

    def test_growth_towards_large_parameters(self) -> None:
        self.assertEqual(unbounded_direction(self.params, np.log1p(self.params) ** 2), "high")

    def test_slow_growth_is_bounded(self) -> None:
        """A factor of 1.5 over the outer two decades is not a trend."""
        values = 1 + 0.5 * np.clip(np.log10(self.params) - 2, 0, None) / 2
        self.assertEqual(classify_trend(self.params, values)[0], BOUNDED)

    def test_rough_growth(self) -> None:
        values = np.ones(17)
        values[-5:] = [1.0, 5.0, 2.0, 6.0, 10.0]
        self.assertEqual(end_behaviours(self.params, values)["high"], "rough")
        self.assertEqual(classify_trend(self.params, values), (INCONCLUSIVE, None))

    def test_divergent_member(self) -> None:
        values = np.ones(17)
        values[3] = np.inf
        self.assertEqual(classify_trend(self.params, values), (UNBOUNDED_TREND, "low"))
        self.assertEqual(classify_trend(self.params, np.ones(17), divergent=True)[0], UNBOUNDED_TREND)

    def test_no_values(self) -> None:
        self.assertEqual(classify_trend([], []), (INCONCLUSIVE, None))
        self.assertEqual(classify_trend([1.0, 2.0], [np.nan, np.nan]), (INCONCLUSIVE, None))

    def test_repeated_parameters_keep_the_largest_value(self) -> None:
        params = np.repeat(self.params, 2)
        values = np.tile([1.0, 0.5], 17)
        self.assertEqual(classify_trend(params, values)[0], BOUNDED)

    @override_settings(CARLESON_TREND_FACTOR=1.2)
    def test_factor_is_configurable(self) -> None:
        values = 1 + 0.5 * np.clip(np.log10(self.params) - 2, 0, None) / 2
        self.assertEqual(classify_trend(self.params, values), (UNBOUNDED_TREND, "high"))


class TestGrids(SimpleTestCase):
    def test_scan_grid(self) -> None:
        grid = ScanGrid(1e-2, 1e2, 5)
        np.testing.assert_allclose(grid.values(), [1e-2, 1e-1, 1.0, 1e1, 1e2])
        self.assertAlmostEqual(grid.decades, 4.0)
        self.assertEqual(ScanGrid.from_dict(grid.as_dict()), grid)

    def test_scan_grid_validation(self) -> None:
        with self.assertRaises(InvalidParameter):
            ScanGrid(1.0, 1.0, 5)
        with self.assertRaises(InvalidParameter):
            ScanGrid(0.0, 1.0, 5)
        with self.assertRaises(InvalidParameter):
            ScanGrid(1.0, 2.0, 1)
        with self.assertRaises(InvalidInput):
            ScanGrid(float("nan"), 1.0, 5)
        with self.assertRaises(InvalidInput):
            ScanGrid.from_dict({"t_min": 1.0})

    def test_index_resolution(self) -> None:
        ScanGrid.default().require_index_resolution()
        with self.assertRaises(InvalidParameter):
            ScanGrid(1e-2, 1e2, 512).require_index_resolution()

    def test_half_plane_grid(self) -> None:
        grid = HalfPlaneGrid.dyadic((-1, 1), (0.0, 2.0))
        self.assertEqual(grid.ys, (0.5, 1.0, 2.0))
        self.assertEqual(grid.points()[:2], [0.5j, 2 + 0.5j])
        self.assertEqual(HalfPlaneGrid.from_dict({"y": [2, 1, 2]}).ys, (1.0, 2.0))
        with self.assertRaises(InvalidParameter):
            HalfPlaneGrid((0.0,), (0.0, 1.0))
        with self.assertRaises(InvalidInput):
            HalfPlaneGrid.from_dict({"x": [0]})

    def test_probe_family_members(self) -> None:
        family = ProbeFamily((-1, 1), (0.0, 10.0))
        members = family.members()
        self.assertEqual(len(members), 6)
        self.assertEqual(members, sorted(members))
        self.assertEqual(members[0], ("c+0/k+00", 0.0, 1.0))
        self.assertIn(("c+10/k-01", 10.0, 0.5), members)

    def test_probe_family_defaults(self) -> None:
        family = ProbeFamily.from_dict({"centers": [3]})
        self.assertEqual(family.length_exponents, (-20, 10))
        self.assertEqual(family.centers, (3.0,))
        with self.assertRaises(InvalidParameter):
            ProbeFamily((2, 1), (0.0,))

    def test_lambda_grid(self) -> None:
        levels = lambda_grid()
        self.assertEqual(len(levels), 25)
        self.assertAlmostEqual(levels[0], 1e-3)
        self.assertAlmostEqual(levels[-1], 1e3)
        self.assertEqual(lambda_grid([2, 1]).tolist(), [1.0, 2.0])
        self.assertEqual(len(lambda_grid({"t_min": 1, "t_max": 10, "points": 3})), 3)
        with self.assertRaises(InvalidParameter):
            lambda_grid([1, -1])


class TestSettings(SimpleTestCase):
    def test_default(self) -> None:
        self.assertEqual(get_setting("TREND_DECADES"), 2.0)

    @override_settings(CARLESON_THREADS=4)
    def test_override(self) -> None:
        self.assertEqual(get_setting("THREADS"), 4)

    def test_unknown(self) -> None:
        with self.assertRaises(KeyError):
            get_setting("NOT_A_SETTING")


class TestOrderedMap(SimpleTestCase):
    def test_order_is_kept(self) -> None:
        self.assertEqual(ordered_map(lambda x: x * x, range(20), threads=4), [x * x for x in range(20)])

    def test_threads(self) -> None:
        seen: "set[str]" = set()

        def record(item: int) -> int:
            seen.add(threading.current_thread().name)
            return item

        ordered_map(record, range(4), threads=1)
        self.assertEqual(seen, {threading.current_thread().name})
