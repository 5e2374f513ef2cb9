"""Time-series CSV and binary field snapshots."""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np
import pandas as pd
from loguru import logger

from ..exceptions import FieldIOError
from ..solver.data_models import EntropyBalanceRecord

TIMESERIES_COLUMNS = ["t", "dSdt", "DT", "Xi", "residual", "force_x", "force_y", "force_z"]

FIELD_MAGIC = b"ESBPFLD\0"
FIELD_VERSION = 1
FIELD_HEADER = np.dtype(
    [
        ("magic", "S8"),
        ("version", "<u4"),
        ("n_elements", "<u4"),
        ("p", "<u4"),
        ("reserved", "<u4"),
        ("t", "<f8"),
    ]
)

PathLike = Union[str, Path]


@dataclass
class FieldSnapshot:
    """Conserved field with node coordinates at time t."""

    p: int
    t: float
    coordinates: np.ndarray  # (K, N, N, N, 3)
    q: np.ndarray  # (K, N, N, N, 5)

    def __post_init__(self):
        n = self.p + 1
        k = self.q.shape[0]
        if self.q.shape != (k, n, n, n, 5) or self.coordinates.shape != (k, n, n, n, 3):
            raise ValueError(
                f"Snapshot arrays do not match p={self.p}: "
                f"q {self.q.shape}, coordinates {self.coordinates.shape}"
            )

    @property
    def n_elements(self) -> int:
        return self.q.shape[0]


def timeseries_frame(records: Iterable[EntropyBalanceRecord]) -> pd.DataFrame:
    rows = [
        [r.t, r.dSdt, r.DT, r.Xi, r.residual, r.force_x, r.force_y, r.force_z] for r in records
    ]
    return pd.DataFrame(rows, columns=TIMESERIES_COLUMNS, dtype=float)


def write_timeseries(records: Iterable[EntropyBalanceRecord], path: PathLike) -> Path:
    """Write the entropy balance records as CSV with round-trip precision.

    An empty stream produces a header-only file.
    """
    path = Path(path)
    frame = timeseries_frame(records)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format="%.17g")
    except OSError as exc:
        raise FieldIOError(f"Cannot write time series: {exc}", str(path)) from exc
    logger.debug(f"Wrote {len(frame)} time-series rows to {path}")
    return path


def read_timeseries(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError) as exc:
        raise FieldIOError(f"Cannot read time series: {exc}", str(path)) from exc
    if list(frame.columns) != TIMESERIES_COLUMNS:
        raise FieldIOError(f"Unexpected time-series header {list(frame.columns)}", str(path))
    return frame.astype(float)


def write_fields(snapshot: FieldSnapshot, path: PathLike) -> Path:
    """Write a snapshot in the little-endian binary field format.

    Layout: one ``FIELD_HEADER`` record, then per element the node
    coordinates followed by the conserved field, all ``<f8`` in C order.
    """
    path = Path(path)
    header = np.zeros(1, dtype=FIELD_HEADER)
    header["magic"] = FIELD_MAGIC
    header["version"] = FIELD_VERSION
    header["n_elements"] = snapshot.n_elements
    header["p"] = snapshot.p
    header["t"] = snapshot.t

    k = snapshot.n_elements
    body = np.concatenate(
        [snapshot.coordinates.reshape(k, -1), snapshot.q.reshape(k, -1)], axis=1
    ).astype("<f8")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("wb") as fh:
            fh.write(header.tobytes())
            fh.write(body.tobytes())
    except OSError as exc:
        raise FieldIOError(f"Cannot write fields: {exc}", str(path)) from exc
    logger.debug(f"Wrote {k} elements at t={snapshot.t:.6e} to {path}")
    return path


def read_fields(path: PathLike) -> FieldSnapshot:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise FieldIOError(f"Cannot read fields: {exc}", str(path)) from exc

    if len(raw) < FIELD_HEADER.itemsize:
        raise FieldIOError("Truncated field header", str(path))
    header = np.frombuffer(raw, dtype=FIELD_HEADER, count=1)[0]
    if header["magic"] != FIELD_MAGIC.rstrip(b"\0"):
        raise FieldIOError("Not a field file (bad magic)", str(path))
    if int(header["version"]) != FIELD_VERSION:
        raise FieldIOError(f"Unsupported field file version {int(header['version'])}", str(path))

    k, p = int(header["n_elements"]), int(header["p"])
    n = p + 1
    per_element = n**3 * 8
    body_bytes = len(raw) - FIELD_HEADER.itemsize
    if body_bytes != k * per_element * 8:
        raise FieldIOError(
            f"Field body has {body_bytes} bytes, expected {k * per_element * 8}", str(path)
        )
    body = np.frombuffer(raw, dtype="<f8", offset=FIELD_HEADER.itemsize)
    body = body.reshape(k, per_element)
    coordinates = body[:, : n**3 * 3].reshape(k, n, n, n, 3).astype(float)
    q = body[:, n**3 * 3 :].reshape(k, n, n, n, 5).astype(float)
    return FieldSnapshot(p=p, t=float(header["t"]), coordinates=coordinates, q=q)
