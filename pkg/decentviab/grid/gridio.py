#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
This file is part of decentviab package.

This module contains the grid dump format: one line of JSON header
(dim, lower, upper, nodes, count) followed by the occupancy packed eight
nodes per byte, C order with the last axis fastest. Traces are stored
as one dump per step plus an index manifest.

Copyright (C) 2026  decentviab developers

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU Lesser General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
GNU Lesser General Public License for more details.

You should have received a copy of the GNU Lesser General Public License
along with this program. If not, see <http://www.gnu.org/licenses/>.
"""

import csv
import io
import json
import logging
import os

import numpy as np

from ..errors import ParameterError
from .gridbox import GridBox
from .gridset import GridSet

__all__ = ["dumps_grid", "loads_grid", "write_grid", "read_grid",
           "write_csv", "write_slice_csv", "write_trace", "read_trace"]

logger = logging.getLogger(__name__)

#: Value of the "format" header field
FORMAT = "decentviab-grid"

#: Version of the dump layout
VERSION = 1


def dumps_grid(gs):
    """
    Serializes a grid set to bytes.

    :param GridSet gs: set to dump
    :rtype: bytes

    TEST: the payload packs eight nodes per byte

    >>> gs = GridSet.full(GridBox([0.0], [1.0], [9]))
    >>> len(dumps_grid(gs).split(b"\\n", 1)[1])
    2
    """
    header = gs.box.to_json()
    header.update({"format": FORMAT, "version": VERSION,
                   "count": gs.count})
    head = json.dumps(header, sort_keys=True).encode("utf-8")
    payload = np.packbits(gs.occupancy.ravel(order="C")).tobytes()
    return head + b"\n" + payload


def loads_grid(data):
    """
    Inverse of :func:`dumps_grid`.

    :exception: ParameterError - malformed header or truncated payload
    """
    try:
        head, payload = data.split(b"\n", 1)
        header = json.loads(head.decode("utf-8"))
    except ValueError as e:
        errmsg = "Malformed grid dump: {0}".format(e)
        raise ParameterError(errmsg)
    if header.get("format") != FORMAT:
        errmsg = "Not a grid dump (format={0!r})".format(header.get("format"))
        raise ParameterError(errmsg)
    box = GridBox.from_json(header)
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    if len(bits) < box.size:
        errmsg = "Grid payload holds {0} bits for {1} nodes".format(
            len(bits), box.size)
        raise ParameterError(errmsg)
    gs = GridSet(box, bits[:box.size].astype(bool).reshape(box.shape))
    if "count" in header and header["count"] != gs.count:
        errmsg = "Grid dump count {0} does not match payload {1}".format(
            header["count"], gs.count)
        raise ParameterError(errmsg)
    return gs


def write_grid(path, gs):
    with open(path, "wb") as f:
        f.write(dumps_grid(gs))


def read_grid(path):
    """
    :exception: ParameterError - unreadable or malformed file
    """
    try:
        with open(path, "rb") as f:
            data = f.read()
    except (IOError, OSError) as e:
        errmsg = "Cannot read grid dump {0}: {1}".format(path, e)
        raise ParameterError(errmsg)
    return loads_grid(data)


def write_csv(path, gs, points=None):
    """
    Writes one row of coordinates per occupied node (or per row of
    ``points`` when given), with a header x0, x1, ...
    """
    pts = gs.occupied_points() if points is None else np.asarray(points)
    dim = pts.shape[1] if pts.ndim == 2 else gs.dim
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x{0}".format(i) for i in range(dim)])
        for row in pts:
            writer.writerow(["{0:.12g}".format(v) for v in row])


def write_slice_csv(path, gs, axes, fixed=None):
    """
    Writes a two dimensional cut as a list of occupied (x, y) points.
    """
    cut = gs.slice2d(axes, fixed)
    xs = gs.box.axis(axes[0])
    ys = gs.box.axis(axes[1]) if gs.dim > 1 else np.zeros(1)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["x{0}".format(axes[0]),
                     "x{0}".format(axes[1] if gs.dim > 1 else axes[0])])
    for i, j in np.argwhere(cut):
        writer.writerow(["{0:.12g}".format(xs[i]), "{0:.12g}".format(ys[j])])
    with open(path, "w", newline="") as f:
        f.write(buf.getvalue())


def write_trace(directory, trace, prefix="step"):
    """
    Dumps every set of a kernel trace and an ``index.json`` listing the
    files in step order.

    :param string directory: target directory, created when missing
    :param list trace: sets indexed by step
    :returns: path of the index
    :rtype: string
    """
    if not os.path.isdir(directory):
        os.makedirs(directory)
    entries = []
    for i, gs in enumerate(trace):
        name = "{0}_{1:04d}.grid".format(prefix, i)
        write_grid(os.path.join(directory, name), gs)
        entries.append({"step": i, "file": name, "count": gs.count})
    index = os.path.join(directory, "index.json")
    with open(index, "w") as f:
        json.dump({"format": FORMAT, "steps": entries}, f, indent=2,
                  sort_keys=True)
    logger.debug("Wrote %d grid dumps to %s", len(entries), directory)
    return index


def read_trace(directory):
    """Reads back the sets listed in ``directory/index.json``."""
    index = os.path.join(directory, "index.json")
    try:
        with open(index) as f:
            entries = json.load(f)["steps"]
    except (IOError, OSError, ValueError, KeyError) as e:
        errmsg = "Cannot read trace index {0}: {1}".format(index, e)
        raise ParameterError(errmsg)
    return [read_grid(os.path.join(directory, e["file"]))
            for e in sorted(entries, key=lambda e: e["step"])]


if __name__ == "__main__":
    import doctest
    doctest.testmod()
