"""
On-disk formats and reproducibility manifests.

Text products are CSV: '#' comment lines naming the producing subcommand,
code version, and manifest checksum, then a header row, then rows at full
double precision.  Wavefunction snapshots and 2D maps share one binary
container: magic "HHG1", format version, record kind, then little-endian
64-bit payloads.  A snapshot file may hold any number of consecutive
wavefunction records.  The run manifest (JSON) stores the resolved
configuration, seed, version, timestamps, and a checksum per output, so a
re-run can be byte-verified.
"""

from __future__ import annotations

import hashlib
import json
import struct
import time
from pathlib import Path

import numpy as np

from . import __version__

MAGIC = b"HHG1"
FORMAT_VERSION = 1
KIND_WAVEFUNCTION = 1
KIND_MAP = 2


class MissingArtifactError(FileNotFoundError):
    """An analysis command needs an upstream product that is not there."""


def sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# --- CSV ---

def write_csv(path, columns: dict[str, np.ndarray], subcommand: str,
              manifest_checksum: str = "", extra_comments: tuple[str, ...] = ()):
    cols = {name: np.asarray(vals) for name, vals in columns.items()}
    n_rows = {c.shape[0] for c in cols.values()}
    if len(n_rows) != 1:
        raise ValueError("CSV columns differ in length")
    with open(path, "w") as fh:
        fh.write(f"# produced-by: hhg1d {subcommand}\n")
        fh.write(f"# version: {__version__}\n")
        fh.write(f"# manifest: {manifest_checksum}\n")
        for line in extra_comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(cols) + "\n")
        for row in zip(*cols.values()):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_csv(path) -> tuple[dict[str, np.ndarray], list[str]]:
    """Returns (columns, comment lines)."""
    comments, header, rows = [], None, []
    path = Path(path)
    if not path.exists():
        raise MissingArtifactError(f"missing file: {path}")
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif header is None:
                header = line.split(",")
            elif line:
                rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ValueError(f"{path}: no header row")
    data = np.array(rows) if rows else np.empty((0, len(header)))
    return {name: data[:, i] for i, name in enumerate(header)}, comments


# --- binary container ---

def _write_header(fh, kind: int):
    fh.write(MAGIC)
    fh.write(struct.pack("<II", FORMAT_VERSION, kind))


def _read_header(fh) -> int | None:
    magic = fh.read(4)
    if not magic:
        return None
    if magic != MAGIC:
        raise ValueError("not an HHG1 binary file")
    version, kind = struct.unpack("<II", fh.read(8))
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    return kind


def append_wavefunction(fh, x_min: float, x_max: float, time_stamp: float,
                        amplitudes: np.ndarray):
    """One snapshot record: grid descriptor, time stamp, interleaved re/im."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    _write_header(fh, KIND_WAVEFUNCTION)
    fh.write(struct.pack("<ddQd", x_min, x_max, amplitudes.size, time_stamp))
    inter = np.empty(2 * amplitudes.size)
    inter[0::2] = amplitudes.real
    inter[1::2] = amplitudes.imag
    fh.write(inter.astype("<f8").tobytes())


def write_wavefunctions(path, x_min: float, x_max: float,
                        times, states) -> None:
    with open(path, "wb") as fh:
        for t, psi in zip(times, states):
            append_wavefunction(fh, x_min, x_max, float(t), psi)


def read_wavefunctions(path) -> tuple[float, float, np.ndarray, np.ndarray]:
    """All snapshot records in a file: (x_min, x_max, times, states)."""
    path = Path(path)
    if not path.exists():
        raise MissingArtifactError(f"missing file: {path}")
    times, states = [], []
    x_min = x_max = None
    with open(path, "rb") as fh:
        while True:
            kind = _read_header(fh)
            if kind is None:
                break
            if kind != KIND_WAVEFUNCTION:
                raise ValueError(f"{path}: expected wavefunction records")
            x_lo, x_hi, n, t = struct.unpack("<ddQd", fh.read(32))
            if x_min is None:
                x_min, x_max = x_lo, x_hi
            elif (x_lo, x_hi) != (x_min, x_max):
                raise ValueError(f"{path}: inconsistent grids between records")
            raw = np.frombuffer(fh.read(16 * n), dtype="<f8")
            states.append(raw[0::2] + 1j * raw[1::2])
            times.append(t)
    return x_min, x_max, np.array(times), np.array(states)


def write_map(path, row_axis, col_axis, values, row_label: str = "",
              col_label: str = "") -> None:
    """2D field with labelled axes, row-major values."""
    values = np.asarray(values, dtype=float)
    row_axis = np.asarray(row_axis, dtype=float)
    col_axis = np.asarray(col_axis, dtype=float)
    if values.shape != (row_axis.size, col_axis.size):
        raise ValueError("map shape does not match its axes")
    with open(path, "wb") as fh:
        _write_header(fh, KIND_MAP)
        for label in (row_label, col_label):
            enc = label.encode()[:64]
            fh.write(struct.pack("<I", len(enc)))
            fh.write(enc)
        fh.write(struct.pack("<QQ", row_axis.size, col_axis.size))
        fh.write(row_axis.astype("<f8").tobytes())
        fh.write(col_axis.astype("<f8").tobytes())
        fh.write(values.astype("<f8").tobytes())


def read_map(path) -> tuple[np.ndarray, np.ndarray, np.ndarray, str, str]:
    path = Path(path)
    if not path.exists():
        raise MissingArtifactError(f"missing file: {path}")
    with open(path, "rb") as fh:
        kind = _read_header(fh)
        if kind != KIND_MAP:
            raise ValueError(f"{path}: expected a map record")
        labels = []
        for _ in range(2):
            (ln,) = struct.unpack("<I", fh.read(4))
            labels.append(fh.read(ln).decode())
        n_rows, n_cols = struct.unpack("<QQ", fh.read(16))
        row_axis = np.frombuffer(fh.read(8 * n_rows), dtype="<f8")
        col_axis = np.frombuffer(fh.read(8 * n_cols), dtype="<f8")
        values = np.frombuffer(fh.read(8 * n_rows * n_cols),
                               dtype="<f8").reshape(n_rows, n_cols)
    return row_axis.copy(), col_axis.copy(), values.copy(), labels[0], labels[1]


# --- manifest ---

class Manifest:
    """Reproducibility ledger of one run directory."""

    def __init__(self, directory, config_text: str = "", master_seed: int = 0):
        self.directory = Path(directory)
        self.data = {
            "version": __version__,
            "master_seed": master_seed,
            "config": config_text,
            "started": time.strftime("%Y-%m-%dT%H:%M:%S"),
            "finished": None,
            "outputs": {},
        }

    @property
    def path(self) -> Path:
        return self.directory / "manifest.json"

    def checksum(self) -> str:
        """Checksum of the configuration + seed, quoted by output headers."""
        key = (self.data["config"] + str(self.data["master_seed"])).encode()
        return hashlib.sha256(key).hexdigest()[:16]

    def record_output(self, path) -> None:
        rel = str(Path(path).relative_to(self.directory))
        self.data["outputs"][rel] = sha256_of(path)

    def save(self) -> None:
        self.data["finished"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        with open(self.path, "w") as fh:
            json.dump(self.data, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, directory) -> "Manifest":
        directory = Path(directory)
        mpath = directory / "manifest.json"
        if not mpath.exists():
            raise MissingArtifactError(f"missing manifest: {mpath}")
        with open(mpath) as fh:
            data = json.load(fh)
        m = cls(directory)
        m.data = data
        return m

    def verify_outputs(self) -> list[str]:
        """Names of recorded outputs whose checksum no longer matches."""
        stale = []
        for rel, digest in self.data["outputs"].items():
            p = self.directory / rel
            if not p.exists() or sha256_of(p) != digest:
                stale.append(rel)
        return stale
