"""Directional height functions and the barcodes they project an embedded complex to."""
from __future__ import annotations

import logging
import math
from typing import Mapping, Sequence

import numpy as np
from joblib import Parallel, delayed

from .complex import SimplicialComplex, VertexFunction
from .config import get_settings
from .errors import MissingCoordinates, ShapeMismatch
from .persistence import Flavor, GradedBarcode, extended_barcode

logger = logging.getLogger(__name__)

Direction = tuple[float, ...]


def directions(count: int, dim: int = 2) -> list[Direction]:
    """
    Unit vectors spread over the circle or the sphere.

    :param count: number of directions
    :param dim: 2 for equally spaced angles, 3 for a Fibonacci lattice
    :return: ``count`` unit vectors
    """
    if count < 0:
        raise ShapeMismatch(f"negative direction count {count}")
    if dim == 2:
        angles = 2 * np.pi * np.arange(count) / max(count, 1)
        vecs = np.column_stack([np.cos(angles), np.sin(angles)])
    elif dim == 3:
        k = np.arange(count) + 0.5
        z = 1 - 2 * k / max(count, 1)
        r = np.sqrt(1 - z**2)
        phi = np.pi * (1 + 5**0.5) * k
        vecs = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        raise ShapeMismatch(f"directions are generated in dimension 2 or 3, not {dim}")
    return [tuple(float(c) for c in v) for v in np.round(vecs, 12)]


def height_function(coords: Mapping[int, Sequence[float]], u: Sequence[float]) -> VertexFunction:
    """v -> <u, coords(v)>, rounded to 12 decimals so exact ties stay ties."""
    direction = np.asarray(u, dtype=float)
    values = {}
    for v, c in coords.items():
        point = np.asarray(c, dtype=float)
        if point.shape != direction.shape:
            raise ShapeMismatch(f"vertex {v} has {point.size} coordinates, direction has {direction.size}")
        values[v] = round(float(point @ direction), 12) + 0.0
    return VertexFunction(values)


def barcode_all_degrees(K: SimplicialComplex, f: VertexFunction, perturb: bool = True) -> GradedBarcode:
    bc = GradedBarcode.build(Flavor.EXTENDED, [], ())
    for p in range(max(K.dim, 0) + 1):
        bc = bc.merge(extended_barcode(K, f, p, perturb=perturb))
    return bc


def _project_one(K: SimplicialComplex, coords, u: Direction, perturb: bool) -> tuple[Direction, GradedBarcode]:
    return u, barcode_all_degrees(K, height_function(coords, u), perturb=perturb)


def project_barcodes(
    K: SimplicialComplex,
    coords: Mapping[int, Sequence[float]] | None,
    dirs: Sequence[Sequence[float]],
    perturb: bool = True,
    n_jobs: int | None = None,
) -> list[tuple[Direction, GradedBarcode]]:
    """
    Extended barcodes of the height functions along each direction.

    :param K: the embedded complex
    :param coords: vertex coordinates; every vertex of K needs one
    :param dirs: directions, normalized here
    :param perturb: break ties in the height function by vertex id
    :param n_jobs: worker count; TDA_THREADS by default
    :return: (direction, barcode over all degrees) in input order
    """
    missing = [v for v in K.vertices if not coords or v not in coords]
    if missing:
        raise MissingCoordinates(f"no coordinates for vertices {missing}")
    unit = []
    for u in dirs:
        norm = math.sqrt(sum(c * c for c in u))
        if norm == 0:
            raise ShapeMismatch("zero direction vector")
        unit.append(tuple(round(c / norm, 12) + 0.0 for c in u))
    if not unit:
        return []
    n_jobs = n_jobs or get_settings().threads
    logger.debug("projecting %d simplices along %d directions on %d workers", len(K), len(unit), n_jobs)
    used = {v: coords[v] for v in K.vertices}
    return Parallel(n_jobs=n_jobs)(delayed(_project_one)(K, used, u, perturb) for u in unit)
