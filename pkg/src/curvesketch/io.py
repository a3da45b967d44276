"""Text formats: trajectory CSV plus manifest, feature and landmark CSV,
distance matrices, rasters and JSON records.

Numbers are written with 17 significant digits so that a float survives a
write/read round trip unchanged.  Lines end in ``\\n``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .curves import CurveError, Polyline
from .features import LandmarkSet

SCHEMA = "curvesketch/1"


class InputError(ValueError):
    """Malformed input file; the message starts with ``path:line:``."""


def fmt(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _float(text: str, path, line: int) -> float:
    try:
        val = float(text)
    except ValueError:
        raise InputError(f"{path}:{line}: not a number: {text!r}") from None
    if not math.isfinite(val):
        raise InputError(f"{path}:{line}: non-finite value {text!r}")
    return val


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_json(path, obj) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None


def manifest_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".manifest.json")


def write_trajectories(path, curves, ids, labels=None) -> Path:
    """Write ``curve_id,seq,x,y`` rows and the sidecar manifest; returns the manifest path."""
    labels = labels if labels is not None else [""] * len(curves)
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["curve_id", "seq", "x", "y"])
        for cid, c in zip(ids, curves):
            for k, (x, y) in enumerate(c.vertices):
                w.writerow([cid, k, fmt(x), fmt(y)])
    man = manifest_path(path)
    write_json(man, {str(cid): {"closed": bool(c.closed), "label": str(lab)}
                     for cid, c, lab in zip(ids, curves, labels)})
    return man


def read_trajectories(path, manifest=None):
    """Read a trajectory CSV; returns (ids, curves, labels) in first-appearance order.

    The manifest defaults to the sidecar next to ``path``; without one every
    curve is open and unlabeled.
    """
    path = Path(path)
    groups: dict[str, list] = {}
    first_line: dict[str, int] = {}
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"{path}:0: cannot read: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["curve_id", "seq", "x", "y"]:
            raise InputError(f"{path}:1: expected header curve_id,seq,x,y")
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != 4:
                raise InputError(f"{path}:{line}: expected 4 fields, got {len(row)}")
            cid = row[0]
            try:
                seq = int(row[1])
            except ValueError:
                raise InputError(f"{path}:{line}: seq is not an integer: {row[1]!r}") from None
            pts = groups.setdefault(cid, [])
            first_line.setdefault(cid, line)
            if seq != len(pts):
                raise InputError(f"{path}:{line}: curve {cid!r} expected seq {len(pts)}, got {seq}")
            pts.append((_float(row[2], path, line), _float(row[3], path, line)))
    if not groups:
        raise InputError(f"{path}:2: no trajectory rows")
    man_file = Path(manifest) if manifest is not None else manifest_path(path)
    if manifest is not None and not man_file.exists():
        raise InputError(f"{man_file}:0: manifest not found")
    meta = read_json(man_file) if man_file.exists() else {}
    if not isinstance(meta, dict):
        raise InputError(f"{man_file}:1: manifest must be a JSON object")
    ids, curves, labels = [], [], []
    for cid, pts in groups.items():
        info = meta.get(cid, {})
        try:
            curves.append(Polyline(np.array(pts), closed=bool(info.get("closed", False))))
        except CurveError as exc:
            raise InputError(f"{path}:{first_line[cid]}: curve {cid!r}: {exc}") from None
        ids.append(cid)
        labels.append(str(info.get("label", "")))
    return ids, curves, labels


def write_landmarks(path, landmarks: LandmarkSet) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["x", "y"])
        for x, y in landmarks.points:
            w.writerow([fmt(x), fmt(y)])
    write_json(Path(path).with_suffix(".json"), {"schema": SCHEMA, "provenance": landmarks.provenance,
                                                 "count": len(landmarks), "digest": landmarks.digest()})


def read_landmarks(path) -> LandmarkSet:
    path = Path(path)
    rows = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"{path}:0: cannot read: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y"]:
            raise InputError(f"{path}:1: expected header x,y")
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise InputError(f"{path}:{reader.line_num}: expected 2 fields, got {len(row)}")
            rows.append((_float(row[0], path, reader.line_num), _float(row[1], path, reader.line_num)))
    if not rows:
        raise InputError(f"{path}:2: no landmarks")
    side = path.with_suffix(".json")
    prov = read_json(side).get("provenance", {"kind": "explicit"}) if side.exists() else {"kind": "explicit"}
    return LandmarkSet(np.array(rows), prov)


def write_features(path, ids, values) -> None:
    values = np.atleast_2d(np.asarray(values, dtype=float))
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["curve_id"] + [f"v_{i + 1}" for i in range(values.shape[1])])
        for cid, row in zip(ids, values):
            w.writerow([cid] + [fmt(x) for x in row])


def read_features(path):
    path = Path(path)
    ids, rows = [], []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise InputError(f"{path}:0: cannot read: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "curve_id" or len(header) < 2:
            raise InputError(f"{path}:1: expected header curve_id,v_1,...")
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise InputError(f"{path}:{reader.line_num}: expected {len(header)} fields, got {len(row)}")
            ids.append(row[0])
            rows.append([_float(x, path, reader.line_num) for x in row[1:]])
    return ids, np.array(rows, dtype=float).reshape(len(rows), len(header) - 1)


def write_matrix(path, ids, matrix) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow([""] + list(ids))
        for cid, row in zip(ids, matrix):
            w.writerow([cid] + [fmt(x) for x in row])


def write_raster_csv(path, raster) -> None:
    """Rows from the lowest y upward, x increasing along each row."""
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        for row in raster:
            w.writerow([fmt(x) for x in row])


def raster_to_gray(raster) -> np.ndarray:
    """Map [-m, m] onto 0..255 with m = max |value|; zero lands on 128 (127.5 rounded)."""
    r = np.asarray(raster, dtype=float)
    m = float(np.abs(r).max())
    scaled = 0.5 if m == 0 else 0.5 + 0.5 * r / m
    return np.clip(np.rint(np.broadcast_to(scaled, r.shape) * 255), 0, 255).astype(np.uint8)


def write_pgm(path, raster) -> None:
    """Plain (P2) PGM with the top image row at the highest y."""
    g = raster_to_gray(raster)[::-1]
    ny, nx = g.shape
    with open(path, "w", newline="\n") as fh:
        fh.write(f"P2\n{nx} {ny}\n255\n")
        for row in g:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")
