"""
Readers for edge-list and Matrix Market files, and the edge-list writer
used by the generators.
Vertex ids are taken literally: an edge list over ids 0..max describes
max+1 vertices, and any id that never appears is an isolated vertex.
"""

import logging

import numpy as np
import scipy.io

from chebyrank.errors import GraphFormatError, GraphValidationError
from chebyrank.graph.core import MAX_VERTICES, build_graph

logger = logging.getLogger(__name__)

SUPPORTED_FIELDS = ("pattern", "real", "integer")
SUPPORTED_SYMMETRIES = ("symmetric", "general")


def load_edge_list(path, dedup=True, drop_isolated=False):
    """
    Load an undirected graph from a whitespace separated edge list.

    Arguments
    ---------
    path : str
        UTF-8 text file, one "u v" pair per line, "#" comment lines.
    dedup : bool
        collapse repeated edges (default). When False, multiplicities are kept
        as integer weights.
    drop_isolated : bool
        drop vertices that never appear instead of failing.

    Returns
    -------
    UndirectedGraph
    """
    heads = []
    tails = []
    with open(path, "rb") as fin:
        for lineno, raw in enumerate(fin, start=1):
            try:
                stripped = raw.decode("utf-8").strip()
            except UnicodeDecodeError as err:
                raise GraphFormatError("not valid UTF-8 text: %s" % err.reason, lineno) from None
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) != 2:
                raise GraphFormatError(
                    "expected two vertex ids, found %d fields" % len(fields), lineno
                )
            if not (fields[0].isdecimal() and fields[1].isdecimal()):
                raise GraphFormatError(
                    "vertex ids must be non-negative integers, got %r" % stripped,
                    lineno,
                )
            u, v = int(fields[0]), int(fields[1])
            if max(u, v) >= MAX_VERTICES:
                raise GraphFormatError(
                    "vertex id %d exceeds the largest supported id %d"
                    % (max(u, v), MAX_VERTICES - 1),
                    lineno,
                )
            heads.append(u)
            tails.append(v)

    n = max(max(heads), max(tails)) + 1 if heads else 0
    g = build_graph(n, heads, tails, dedup=dedup, drop_isolated=drop_isolated)
    logger.info("loaded %s: n=%d, m=%d", path, g.n, g.m)
    return g


def load_matrix_market(path, symmetrize=False, drop_isolated=False):
    """
    Load an undirected graph from a coordinate Matrix Market file.

    Entry values of real or integer matrices are ignored (with a warning):
    every stored entry is an edge. A general matrix must list both (i, j)
    and (j, i) unless symmetrize is set, which adds the missing mirrors.

    Arguments
    ---------
    path : str
        .mtx file with a "%%MatrixMarket matrix coordinate ..." header.
    symmetrize : bool
        accept asymmetric general matrices by mirroring their entries.
    drop_isolated : bool
        drop vertices without entries instead of failing.

    Returns
    -------
    UndirectedGraph
    """
    try:
        rows, cols, _, fmt, field, symmetry = scipy.io.mminfo(path)
    except ValueError as err:
        raise GraphFormatError("not a Matrix Market file: %s" % err) from None
    if fmt != "coordinate":
        raise GraphFormatError("unsupported Matrix Market format %r" % fmt)
    if field not in SUPPORTED_FIELDS:
        raise GraphFormatError("unsupported Matrix Market field %r" % field)
    if symmetry not in SUPPORTED_SYMMETRIES:
        raise GraphFormatError("unsupported Matrix Market symmetry %r" % symmetry)
    if rows != cols:
        raise GraphFormatError("adjacency matrix must be square, got %dx%d" % (rows, cols))
    if rows > MAX_VERTICES:
        raise GraphFormatError(
            "%d rows exceed the supported maximum of %d vertices" % (rows, MAX_VERTICES)
        )

    try:
        matrix = scipy.io.mmread(path)
    except ValueError as err:
        raise GraphFormatError("could not read %s: %s" % (path, err)) from None
    # mmread already mirrors the stored triangle of symmetric matrices
    row = np.asarray(matrix.row, dtype=np.int64)
    col = np.asarray(matrix.col, dtype=np.int64)
    if field != "pattern":
        logger.warning("ignoring %s entry values in %s, edges are unweighted", field, path)

    n = int(rows)
    if symmetry == "general":
        forward = np.unique(row * n + col)
        backward = np.unique(col * n + row)
        missing = np.setdiff1d(forward, backward, assume_unique=True)
        if missing.size:
            if not symmetrize:
                i, j = divmod(int(missing[0]), n)
                raise GraphValidationError(
                    "general matrix is not symmetric: entry (%d, %d) has no mirror "
                    "(%d, %d); %d entries lack a mirror"
                    % (i + 1, j + 1, j + 1, i + 1, missing.size)
                )
            logger.info("symmetrize: mirroring %d entries", missing.size)

    g = build_graph(n, row, col, dedup=True, drop_isolated=drop_isolated)
    logger.info("loaded %s: n=%d, m=%d", path, g.n, g.m)
    return g


def load_graph(path, fmt="edgelist", dedup=True, symmetrize=False, drop_isolated=False):
    """Dispatch to the loader of the given format ("edgelist" or "mtx")"""
    if fmt == "edgelist":
        return load_edge_list(path, dedup=dedup, drop_isolated=drop_isolated)
    if fmt == "mtx":
        return load_matrix_market(
            path, symmetrize=symmetrize, drop_isolated=drop_isolated
        )
    raise ValueError("unknown graph format %r" % fmt)


def write_edge_list(path, edges, header=()):
    """
    Write edges as a loadable edge list.

    Arguments
    ---------
    path : str
        destination file.
    edges : array-like of shape (E, 2)
        undirected edges; written once each as "u v" with u <= v, sorted.
    header : iterable of str
        comment lines written first, each prefixed with "# ".
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    edges = np.sort(edges, axis=1)
    edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
    with open(path, "w", encoding="utf-8") as fout:
        for line in header:
            fout.write("# %s\n" % line)
        for u, v in edges:
            fout.write("%d %d\n" % (u, v))
    logger.info("wrote %d edges to %s", len(edges), path)
