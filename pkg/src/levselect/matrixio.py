"""Reading and writing dense matrices: MatrixMarket coordinate files and CSV."""
import csv
import io
from pathlib import Path

import numpy as np

from .errors import ParseError, TooLarge

DEFAULT_CELL_BUDGET = 50_000_000
FORMATS = ("matrixmarket", "csv")


def guess_format(path):
    suffix = Path(path).suffix.lower()
    if suffix in (".mtx", ".mm"):
        return "matrixmarket"
    return "csv"


def load_matrix(path, fmt=None, cell_budget=DEFAULT_CELL_BUDGET):
    """Load a dense ``float64`` matrix from ``path``.

    ``fmt`` is ``"matrixmarket"`` or ``"csv"``; guessed from the suffix when
    omitted. Sparse inputs are densified, and anything with more than
    ``cell_budget`` cells is refused with :class:`TooLarge`.
    """
    fmt = fmt or guess_format(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "matrixmarket":
        return parse_matrix_market(text, cell_budget)
    if fmt == "csv":
        return parse_csv(text, cell_budget)
    raise ValueError(f"unknown format {fmt!r}")


def _check_budget(m, n, budget):
    if m * n > budget:
        raise TooLarge(f"{m}x{n} matrix has {m * n} cells, over the budget of {budget}")


def parse_matrix_market(text, cell_budget=DEFAULT_CELL_BUDGET):
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise ParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'", 1)
    obj, layout, field, symmetry = (h.lower() for h in header[1:])
    if obj != "matrix":
        raise ParseError(f"unsupported object {obj!r}", 1)
    if layout not in ("coordinate", "array"):
        raise ParseError(f"unsupported format {layout!r}", 1)
    if field not in ("real", "integer", "double", "pattern"):
        raise ParseError(f"unsupported field {field!r}", 1)
    if symmetry not in ("general", "symmetric", "skew-symmetric"):
        raise ParseError(f"unsupported symmetry {symmetry!r}", 1)
    if field == "pattern" and layout == "array":
        raise ParseError("pattern field requires coordinate layout", 1)

    body = [(no, ln.strip()) for no, ln in enumerate(lines[1:], start=2)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line", len(lines))
    size_no, size_line = body[0]
    try:
        dims = [int(tok) for tok in size_line.split()]
    except ValueError:
        raise ParseError(f"bad size line {size_line!r}", size_no) from None
    if layout == "coordinate" and len(dims) != 3 or layout == "array" and len(dims) != 2:
        raise ParseError(f"bad size line {size_line!r}", size_no)
    m, n = dims[0], dims[1]
    if m <= 0 or n <= 0:
        raise ParseError("matrix dimensions must be positive", size_no)
    _check_budget(m, n, cell_budget)
    a = np.zeros((m, n))
    entries = body[1:]

    if layout == "array":
        values = []
        for no, ln in entries:
            try:
                values.append(float(ln.split()[0]))
            except (ValueError, IndexError):
                raise ParseError(f"bad value {ln!r}", no) from None
        expected = m * n if symmetry == "general" else m * (m + 1) // 2
        if len(values) != expected:
            raise ParseError(f"expected {expected} values, found {len(values)}", size_no)
        if symmetry == "general":
            return np.array(values).reshape((n, m)).T.copy()
        pos = 0
        for j in range(n):
            for i in range(j, m):
                a[i, j] = values[pos]
                pos += 1
        return _mirror(a, symmetry)

    nnz = dims[2]
    if len(entries) != nnz:
        raise ParseError(f"header declares {nnz} entries, found {len(entries)}", size_no)
    width = 2 if field == "pattern" else 3
    for no, ln in entries:
        toks = ln.split()
        if len(toks) < width:
            raise ParseError(f"expected {width} fields, got {ln!r}", no)
        try:
            i, j = int(toks[0]), int(toks[1])
            val = 1.0 if field == "pattern" else float(toks[2])
        except ValueError:
            raise ParseError(f"bad entry {ln!r}", no) from None
        if not (1 <= i <= m and 1 <= j <= n):
            raise ParseError(f"index ({i}, {j}) outside {m}x{n}", no)
        if not np.isfinite(val):
            raise ParseError(f"non-finite value {toks[2]!r}", no)
        a[i - 1, j - 1] += val
    if symmetry != "general":
        if m != n:
            raise ParseError(f"{symmetry} matrix must be square", size_no)
        return _mirror(a, symmetry)
    return a


def _mirror(a, symmetry):
    lower = np.tril(a, -1)
    if symmetry == "symmetric":
        return np.tril(a) + lower.T
    return np.tril(a) - lower.T


def parse_csv(text, cell_budget=DEFAULT_CELL_BUDGET):
    rows = []
    width = None
    for no, rec in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not rec or all(not f.strip() for f in rec):
            continue
        try:
            row = [float(f) for f in rec]
        except ValueError:
            raise ParseError(f"non-numeric field in {','.join(rec)!r}", no) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"expected {width} fields, got {len(row)}", no)
        if not all(np.isfinite(row)):
            raise ParseError("non-finite value", no)
        rows.append(row)
        _check_budget(len(rows), width, cell_budget)
    if not rows:
        raise ParseError("no data rows", 1)
    return np.array(rows, dtype=np.float64)


def format_float(x):
    """Shortest representation that round-trips exactly."""
    return repr(float(x))


def write_matrix(a, path, fmt=None):
    """Write ``a`` densely as CSV or as a MatrixMarket coordinate file.

    Values use ``repr`` so reading them back is exact.
    """
    fmt = fmt or guess_format(path)
    a = np.asarray(a, dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            for row in a:
                fh.write(",".join(format_float(x) for x in row))
                fh.write("\n")
        elif fmt == "matrixmarket":
            rows, cols = np.nonzero(a)
            fh.write("%%MatrixMarket matrix coordinate real general\n")
            fh.write(f"{a.shape[0]} {a.shape[1]} {len(rows)}\n")
            for i, j in zip(rows, cols):
                fh.write(f"{i + 1} {j + 1} {format_float(a[i, j])}\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
