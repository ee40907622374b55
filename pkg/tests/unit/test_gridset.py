import json

import numpy as np
import pytest

from decentviab.errors import (EmptySetError, GridMismatchError,
                               ParameterError, ResourceCapError)
from decentviab.grid import ControlBox, GridBox, GridSet, volume_fraction
from decentviab.grid.gridio import (dumps_grid, loads_grid, read_trace,
                                    write_csv, write_trace)
from decentviab.grid.shapes import (BallShape, BoxShape, shape_from_json,
                                    TransformedShape)
from decentviab.kernel.queries import (distance_field, field_at,
                                       SummedAreaTable)


@pytest.fixture
def segment():
    return GridBox([-1.0], [1.0], [5])


@pytest.fixture
def cube():
    return GridBox([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0], [5, 5, 5])


#
# Test for GridBox(lower, upper, nodes)
#

@pytest.mark.parametrize("lower, upper, nodes", [
    ([0.0], [1.0], [1]),
    ([1.0], [0.0], [3]),
    ([0.0, 0.0], [1.0], [3, 3]),
    ([0.0], [float("inf")], [3]),
    ([0.0], [1.0], [2.5]),
])
def test_invalid_boxes(lower, upper, nodes):
    with pytest.raises(ParameterError):
        GridBox(lower, upper, nodes)


def test_box_spacing_and_json():
    box = GridBox([-1.0, 0.0], [1.0, 3.0], [5, 4])
    assert box.h.tolist() == [0.5, 1.0]
    assert box.size == 20
    assert box.half_cell == 0.5
    assert GridBox.from_json(json.loads(json.dumps(box.to_json()))) == box


def test_box_json_dimension_mismatch():
    with pytest.raises(ParameterError):
        GridBox.from_json({"dim": 3, "lower": [0.0], "upper": [1.0],
                           "nodes": [3]})


def test_index_range_snaps_to_nodes(segment):
    a, b, inside = segment.index_range([[-0.5]], [[0.25]])
    assert a.tolist() == [[1]]
    assert b.tolist() == [[3]]
    assert inside.tolist() == [True]
    _, _, inside = segment.index_range([[-1.2]], [[0.0]])
    assert inside.tolist() == [False]


#
# Test for GridSet set algebra
#

def test_set_algebra(segment):
    left = GridSet.from_predicate(segment, lambda x: x[:, 0] <= 0.0)
    right = GridSet.from_predicate(segment, lambda x: x[:, 0] >= 0.0)
    assert left.count == right.count == 3
    assert left.intersection(right).count == 1
    assert left.union(right) == GridSet.full(segment)
    assert left.difference(right).occupancy.tolist() == \
        [True, True, False, False, False]
    assert left.intersection(right).issubset(left)
    assert not left.issubset(right)


def test_mismatched_grids_are_rejected(segment):
    other = GridBox([-1.0], [1.0], [9])
    with pytest.raises(GridMismatchError):
        GridSet.full(segment).union(GridSet.full(other))
    with pytest.raises(GridMismatchError):
        volume_fraction(GridSet.full(segment), GridSet.full(other))


def test_occupancy_size_is_checked(segment):
    with pytest.raises(ParameterError):
        GridSet(segment, [1, 1, 1])


def test_empty_set_queries(segment):
    empty = GridSet.empty(segment)
    assert empty.is_empty()
    assert empty.occupied_points().shape == (0, 1)
    with pytest.raises(EmptySetError):
        empty.interval_hull()
    with pytest.raises(EmptySetError):
        empty.sup_norm_of_set()
    assert volume_fraction(empty, empty) == 0.0


#
# Test for GridSet.erode(radius) and GridSet.dilate(cells)
#

def test_erode_counts_outside_as_empty(segment):
    full = GridSet.full(segment)
    assert full.erode(0.0) == full
    assert full.erode(0.5).occupancy.tolist() == \
        [False, True, True, True, False]
    assert full.erode(0.3) == full.erode(0.5)
    assert full.erode(0.6).occupancy.tolist() == \
        [False, False, True, False, False]


def test_negative_erosion_radius(segment):
    with pytest.raises(ParameterError):
        GridSet.full(segment).erode(-0.1)


def test_dilate_single_node(segment):
    one = GridSet(segment, [0, 0, 1, 0, 0])
    assert one.dilate(1).occupancy.tolist() == \
        [False, True, True, True, False]
    assert one.dilate(0) == one


def test_boundary_of_a_segment(segment):
    b = GridSet.full(segment).boundary()
    assert b.occupancy.tolist() == [True, False, False, False, True]


#
# Test for GridSet.cross_product(other, node_cap)
#

def test_cross_product(segment):
    left = GridSet(segment, [1, 1, 0, 0, 0])
    right = GridSet(segment, [0, 0, 0, 1, 1])
    prod = left.cross_product(right)
    assert prod.dim == 2
    assert prod.count == 4
    assert prod.project([0]) == left
    assert prod.project([1]) == right


def test_cross_product_cap(segment):
    with pytest.raises(ResourceCapError) as e:
        GridSet.full(segment).cross_product(GridSet.full(segment),
                                            node_cap=10)
    assert e.value.details["nodes"] == 25
    assert e.value.exit_code == 3


#
# Test for GridSet.interval_hull() and GridSet.slice2d(axes, fixed)
#

def test_interval_hull_adds_half_cells(cube):
    gs = GridSet.from_predicate(cube, lambda x: np.all(np.abs(x) <= 0.5,
                                                       axis=1))
    hull = gs.interval_hull()
    assert np.allclose(hull.lower, -0.75)
    assert np.allclose(hull.upper, 0.75)


def test_slice_through_a_half_cube(cube):
    gs = GridSet.from_predicate(cube, lambda x: x[:, 2] >= 0.0)
    assert gs.slice2d([0, 1]).all()
    assert not gs.slice2d([0, 1], {2: -1.0}).any()
    lower_half = GridSet.from_predicate(cube, lambda x: x[:, 0] <= 0.0)
    cut = lower_half.slice2d([1, 0])
    assert cut.shape == (5, 5)
    assert cut[:, 0].all() and not cut[:, 4].any()


def test_slice_needs_distinct_axes(cube):
    with pytest.raises(ParameterError):
        GridSet.full(cube).slice2d([1, 1])
    with pytest.raises(ParameterError):
        GridSet.full(cube).slice2d([0, 3])


#
# Test for ControlBox(lower, upper)
#

def test_control_box():
    u = ControlBox([-10.0], [10.0])
    assert u.radius == 10.0
    assert u.contains([10.0]) and not u.contains([10.5])
    assert u.samples(5).ravel().tolist() == [-10.0, -5.0, 0.0, 5.0, 10.0]
    assert ControlBox.from_json(u.to_json()) == u
    with pytest.raises(ParameterError):
        ControlBox([1.0], [0.0])
    with pytest.raises(ParameterError):
        u.samples(1)


def test_degenerate_axis_gives_one_sample():
    u = ControlBox([0.0, -1.0], [0.0, 1.0])
    assert u.samples(3).shape == (3, 2)


#
# Test for shape_from_json(obj, dim)
#

def test_shapes():
    ball = BallShape([0.0, 0.0], 0.6, 2)
    assert ball([[0.5, 0.0], [0.5, 0.5]]).tolist() == [True, False]
    box = BoxShape([0.0, -0.4], [0.9, 0.4])
    assert box([[0.9, 0.4], [0.95, 0.0]]).tolist() == [True, False]
    swapped = TransformedShape([[0.0, 1.0], [1.0, 0.0]], box)
    assert swapped([[0.4, 0.9]]).tolist() == [True]


def test_shape_json_round_trip():
    obj = {"type": "intersection", "parts": [
        {"type": "ball", "center": [0.0, 0.0], "radius": 1.0,
         "norm": "inf"},
        {"type": "box", "lower": [0.0, -2.0], "upper": [2.0, 2.0]}]}
    s = shape_from_json(obj, dim=2)
    again = shape_from_json(json.loads(json.dumps(s.to_json())))
    pts = [[0.5, 0.5], [-0.5, 0.0], [1.5, 0.0]]
    assert s(pts).tolist() == again(pts).tolist() == [True, False, False]


@pytest.mark.parametrize("obj", [
    {"type": "hexagon"},
    {"type": "box", "lower": [0.0]},
    {"type": "ball", "center": [0.0], "radius": 1.0, "norm": 3},
    {"type": "union", "parts": []},
    [1, 2, 3],
])
def test_bad_shapes(obj):
    with pytest.raises(ParameterError):
        shape_from_json(obj)


def test_shape_dimension_is_checked():
    with pytest.raises(ParameterError):
        shape_from_json({"type": "box", "lower": [0.0], "upper": [1.0]},
                        dim=2)


#
# Test for dumps_grid(gs) and loads_grid(data)
#

def test_grid_dump_is_exact(cube):
    gs = GridSet.from_predicate(cube, lambda x: x.sum(axis=1) <= 0.25)
    again = loads_grid(dumps_grid(gs))
    assert again == gs
    assert dumps_grid(again) == dumps_grid(gs)


def test_grid_dump_header(segment):
    head = dumps_grid(GridSet.full(segment)).split(b"\n", 1)[0]
    header = json.loads(head.decode("utf-8"))
    assert header["format"] == "decentviab-grid"
    assert header["count"] == 5
    assert header["nodes"] == [5]


@pytest.mark.parametrize("data", [
    b"no header line",
    b'{"format": "other"}\n\x00',
])
def test_malformed_dumps(data):
    with pytest.raises(ParameterError):
        loads_grid(data)


def test_truncated_payload(cube):
    data = dumps_grid(GridSet.full(cube))
    with pytest.raises(ParameterError):
        loads_grid(data[:-3])


def test_trace_directory(tmp_path, segment):
    trace = [GridSet.full(segment), GridSet(segment, [0, 1, 1, 1, 0])]
    write_trace(str(tmp_path / "trace"), trace)
    assert read_trace(str(tmp_path / "trace")) == trace


def test_csv_has_one_row_per_node(tmp_path, segment):
    path = str(tmp_path / "set.csv")
    write_csv(path, GridSet(segment, [0, 1, 1, 0, 0]))
    with open(path) as f:
        rows = f.read().splitlines()
    assert rows == ["x0", "-0.5", "0"]


#
# Test for SummedAreaTable and distance_field(gs)
#

def test_box_queries_match_brute_force(cube):
    rng = np.random.RandomState(3)
    gs = GridSet(cube, rng.rand(*cube.shape) < 0.8)
    sat = SummedAreaTable(gs)
    centers = rng.uniform(-1.0, 1.0, size=(200, 3))
    radii = rng.uniform(0.0, 0.6, size=(200, 3))
    got = sat.contains_boxes(centers, radii)
    a, b, inside = cube.index_range(centers - radii, centers + radii)
    for k in range(200):
        if not inside[k]:
            assert not got[k]
            continue
        block = gs.occupancy[tuple(slice(lo, hi + 1)
                                   for lo, hi in zip(a[k], b[k]))]
        assert got[k] == bool(block.all())


def test_distance_field_of_a_square():
    box = GridBox([-1.0, -1.0], [1.0, 1.0], [9, 9])
    field = distance_field(GridSet.full(box))
    assert field[4, 4] == pytest.approx(1.0)
    assert field[0, 4] == pytest.approx(0.0)
    assert field_at(box, field, [[0.0, 0.0]])[0] == pytest.approx(1.0)
    assert field_at(box, field, [[2.0, 0.0]])[0] == -np.inf


def test_distance_field_of_empty_set(segment):
    field = distance_field(GridSet.empty(segment))
    assert np.allclose(field, -0.5)
