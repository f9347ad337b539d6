"""``ggf`` command-line experiment runner.

Each command reads an experiment configuration (flags and/or a flat
``key=value`` file, flags winning), runs one library operation and emits a
CSV table on stdout (JSON with ``--json``).  With ``--out DIR`` the same
tables, operator files and optional PNG figures are written to ``DIR``.

Exit codes: 0 success, 2 precondition or input failure, 3 numerical
tolerance failure (an identity that must hold exactly did not).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gframe as gf
from . import generators as gen
from . import io as ggio
from . import plotting
from .lattice import Lattice, LatticeError, parse_lattice
from .seqspace import Weight, norm_equivalence_experiment
from .spreading import NotPeriodicError, fourier_series_of_periodic, spreading_of
from .tfcore import DimensionError, hs_norm

EXIT_OK, EXIT_PRECONDITION, EXIT_TOLERANCE = 0, 2, 3

COMMANDS = (
    "frame-bounds", "janssen", "wexler-raz", "dual", "reconstruct", "cohen",
    "norm-equiv", "svd-windows", "adjoint-lattice", "periodic-fourier",
)

DEFAULTS = {
    "L": 12,
    "lattice": "sep:2,3",
    "gen": "gaussian",
    "gen2": None,
    "signal": None,
    "op": None,
    "p": 2.0,
    "weight": "const",
    "probes": 20,
    "seed": 0,
    "tol": None,
    "json": False,
    "figures": False,
    "out": None,
}

TOLERANCES = {
    "frame-bounds": 1e-10,
    "janssen": 1e-10,
    "wexler-raz": 1e-9,
    "dual": 1e-9,
    "reconstruct": 1e-9,
    "cohen": 1e-10,
    "norm-equiv": 1e-9,
    "periodic-fourier": 1e-10,
}


class ConfigError(ValueError):
    def __init__(self, key, msg):
        self.key = key
        super().__init__(f"config field '{key}': {msg}")


class ToleranceFailure(Exception):
    pass


# --------------------------------------------------------------------------
# configuration

@dataclass
class ExperimentConfig:
    command: str
    L: int
    lattice: Lattice
    gen: str
    gen2: str | None
    signal: str | None
    op: str | None
    p: float
    weight: Weight
    probes: int
    seed: int
    tol: float
    json: bool
    figures: bool
    out: str | None
    base_dir: Path = field(default_factory=Path.cwd)

    @classmethod
    def from_mapping(cls, raw: dict, base_dir=None) -> "ExperimentConfig":
        d = {**DEFAULTS, **{k: v for k, v in raw.items() if v is not None}}
        command = d.get("command")
        if command not in COMMANDS:
            raise ConfigError("command", f"unknown command {command!r}")
        L = _as_int(d, "L")
        if L < 2:
            raise ConfigError("L", "must be at least 2")
        try:
            lat = parse_lattice(str(d["lattice"]), L)
        except LatticeError as exc:
            raise ConfigError("lattice", str(exc)) from None
        p = _as_float(d, "p")
        if p < 1:
            raise ConfigError("p", "exponent must be >= 1")
        probes = _as_int(d, "probes")
        if probes < 1:
            raise ConfigError("probes", "must be positive")
        tol = TOLERANCES.get(command, 0.0) if d["tol"] is None else _as_float(d, "tol")
        return cls(
            command=command,
            L=L,
            lattice=lat,
            gen=str(d["gen"]),
            gen2=d["gen2"],
            signal=d["signal"],
            op=d["op"],
            p=p,
            weight=parse_weight(str(d["weight"]), L, Path(base_dir or Path.cwd())),
            probes=probes,
            seed=_as_int(d, "seed"),
            tol=tol,
            json=_as_bool(d, "json"),
            figures=_as_bool(d, "figures"),
            out=d["out"],
            base_dir=Path(base_dir or Path.cwd()),
        )


def _as_int(d, key):
    try:
        return int(d[key])
    except (TypeError, ValueError):
        raise ConfigError(key, f"expected an integer, got {d[key]!r}") from None


def _as_float(d, key):
    v = d[key]
    if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(key, f"expected a number, got {v!r}") from None


def _as_bool(d, key):
    v = d[key]
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(key, f"expected a boolean, got {v!r}")


def read_config_file(path) -> dict:
    """Flat ``key=value`` file; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        if k not in DEFAULTS and k != "command":
            raise ConfigError(k, f"unknown key in {path}:{n}")
        out[k] = v
    return out


def _resolve(path: str, base: Path) -> Path:
    p = Path(path)
    return p if p.is_absolute() else base / p


def parse_weight(spec: str, L: int, base: Path) -> Weight:
    if spec in ("const", "constant", "1"):
        return Weight.constant()
    if spec.startswith("poly:"):
        try:
            return Weight.polynomial(float(spec[5:]))
        except ValueError as exc:
            raise ConfigError("weight", str(exc)) from None
    if spec.startswith("file:"):
        try:
            return Weight.table(ggio.load_grid(_resolve(spec[5:], base)))
        except (ggio.FormatError, ValueError) as exc:
            raise ConfigError("weight", str(exc)) from None
    raise ConfigError("weight", f"unknown weight {spec!r}; use const | poly:s | file:path.csv")


def build_window(spec: str, L: int, base: Path) -> np.ndarray:
    if spec == "gaussian":
        return gen.window_gaussian(L)
    if spec.startswith("box:"):
        try:
            return gen.window_box(L, int(spec[4:]))
        except ValueError as exc:
            raise ConfigError("gen", str(exc)) from None
    if spec.startswith("file:"):
        _, w = ggio.load(_resolve(spec[5:], base), "signal")
        if w.shape[0] != L:
            raise ConfigError("gen", f"window file has length {w.shape[0]}, L={L}")
        return w
    raise ConfigError("gen", f"unknown window {spec!r}; use gaussian | box:w | file:path")


def _mask(spec: str, lat: Lattice, base: Path) -> np.ndarray:
    L = lat.L
    if spec == "tile":
        return gen.fundamental_domain(lat)
    if spec == "ones":
        return np.ones((L, L))
    if spec == "zero":
        return np.zeros((L, L))
    grid = ggio.load_grid(_resolve(spec, base))
    if grid.shape != (L, L):
        raise ConfigError("gen", f"mask {spec} is {grid.shape}, expected {(L, L)}")
    return grid


_POINT = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*$")


def build_generator(spec: str, cfg: ExperimentConfig) -> np.ndarray:
    """Turn a generator spec into an L x L operator.

    gaussian | box:w | file:path | random:rank[:seed] |
    multiwindow:W+W+... | locop:MASK[:W] | underspread:k,l;k,l...[@c1,c2,...]
    """
    L, lat, base = cfg.L, cfg.lattice, cfg.base_dir
    if spec == "gaussian" or spec.startswith("box:"):
        w = build_window(spec, L, base)
        return gen.rank_one(w, w)
    if spec.startswith("file:"):
        kind, arr = ggio.load(_resolve(spec[5:], base))
        if arr.shape[0] != L:
            raise ConfigError("gen", f"{spec} has dimension {arr.shape[0]}, L={L}")
        if kind == "signal":
            return gen.rank_one(arr, arr)
        if kind == "op":
            return arr
        raise ConfigError("gen", f"{spec} holds a ggf-{kind}, expected a signal or op")
    if spec.startswith("random:"):
        parts = spec.split(":")[1:]
        try:
            rank = int(parts[0])
            seed = int(parts[1]) if len(parts) > 1 else cfg.seed
        except (ValueError, IndexError):
            raise ConfigError("gen", f"malformed {spec!r}; use random:rank[:seed]") from None
        try:
            return gen.random_op(L, rank, seed)
        except ValueError as exc:
            raise ConfigError("gen", str(exc)) from None
    if spec.startswith("multiwindow:"):
        ws = gen.WindowSet([build_window(w, L, base) for w in spec[12:].split("+")])
        return gen.multiwindow_op(ws)
    if spec.startswith("locop:"):
        mask, _, window = spec[6:].partition(":")
        return gen.localization_op(_mask(mask, lat, base), build_window(window or "gaussian", L, base))
    if spec.startswith("underspread:"):
        body, _, coef = spec[12:].partition("@")
        pts = []
        for item in body.split(";"):
            m = _POINT.match(item)
            if not m:
                raise ConfigError("gen", f"bad underspread point {item!r}; use k,l;k,l")
            pts.append((int(m.group(1)), int(m.group(2))))
        try:
            coeffs = [complex(c.replace(" ", "")) for c in coef.split(",")] if coef else 1.0
        except ValueError:
            raise ConfigError("gen", f"bad underspread coefficients {coef!r}") from None
        if coef and len(coeffs) != len(pts):
            raise ConfigError("gen", "need one coefficient per underspread point")
        return gen.underspread_op(pts, coeffs, lat)
    raise ConfigError("gen", f"unknown generator {spec!r}")


# --------------------------------------------------------------------------
# output helpers

def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (complex, np.complexfloating)):
        return ggio.format_complex(v)
    if isinstance(v, (float, np.floating)):
        # NaN marks a quantity that does not apply (e.g. no dual when not a frame)
        return "" if math.isnan(v) else repr(float(v))
    if v is None:
        return ""
    return str(v)


def csv_text(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0].keys())
    for r in rows:
        w.writerow([_cell(v) for v in r.values()])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        return ggio.format_complex(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return None if math.isnan(v) else float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def json_text(tables: dict) -> str:
    data = {name: [{k: _jsonable(v) for k, v in r.items()} for r in rows]
            for name, rows in tables.items()}
    return json.dumps(data, indent=2) + "\n"


@dataclass
class Result:
    code: int = EXIT_OK
    tables: dict = field(default_factory=dict)  # name -> list of row dicts
    files: dict = field(default_factory=dict)  # filename -> str | bytes
    message: str = ""

    def render(self, as_json: bool) -> str:
        if as_json:
            return json_text(self.tables)
        return "\n".join(csv_text(rows) for rows in self.tables.values())


# --------------------------------------------------------------------------
# commands

def _frame_bounds(cfg):
    S = build_generator(cfg.gen, cfg)
    rep = gf.frame_bounds(S, cfg.lattice, seed=cfg.seed)
    res = Result(tables={"frame_bounds": [rep.as_row()]})
    res.files["frame_bounds.txt"] = rep.to_text()
    if cfg.figures:
        w = np.linalg.eigvalsh(gf.gframe_operator(S, cfg.lattice))
        res.files["frame_bounds_spectrum.png"] = plotting.spectrum(w, rep.A, rep.B)
        c = np.abs(spreading_of(S.conj().T @ S))
        res.files["frame_bounds_spreading.png"] = plotting.phase_space_image(
            c, "|spreading of S*S|, adjoint lattice marked",
            cfg.lattice.adjoint().point_array, "magnitude")
    if rep.janssen_residual > cfg.tol:
        res.code = EXIT_TOLERANCE
        res.message = f"janssen_residual {rep.janssen_residual:.3e} exceeds {cfg.tol:g}"
    return res


def _janssen(cfg):
    S = build_generator(cfg.gen, cfg)
    lat = cfg.lattice
    P = gf.periodize(S, lat)
    J = gf.janssen_rep(S, lat)
    scale = hs_norm(P)
    r = hs_norm(P - J) / scale if scale > 0 else hs_norm(J)
    adj = lat.adjoint()
    res = Result(tables={"janssen": [{
        "L": lat.L, "lattice": lat.spec(), "card": lat.card, "adjoint": adj.spec(),
        "adjoint_card": adj.card, "janssen_residual": r, "seed": cfg.seed,
    }]})
    if r > cfg.tol:
        res.code, res.message = EXIT_TOLERANCE, f"janssen_residual {r:.3e} exceeds {cfg.tol:g}"
    return res


def _wexler_raz(cfg):
    lat = cfg.lattice
    S = build_generator(cfg.gen, cfg)
    if cfg.gen2:
        T, t_spec = build_generator(cfg.gen2, cfg), cfg.gen2
    else:
        T, t_spec = gf.canonical_dual(S, lat), "canonical-dual"
    wr = gf.wexler_raz_check(S, T, lat, tol=cfg.tol)
    wr2 = gf.wexler_raz_check(T, S, lat, tol=cfg.tol)
    row = {
        "L": lat.L, "lattice": lat.spec(), "T": t_spec,
        "biorth_ok": wr.biorth_ok, "recon_ok": wr.recon_ok,
        "biorth_residual": wr.biorth_residual, "recon_residual": wr.recon_residual,
        "biorth_ok_swapped": wr2.biorth_ok, "recon_ok_swapped": wr2.recon_ok,
        "agree": wr.biorth_ok == wr.recon_ok and wr2.biorth_ok == wr2.recon_ok,
        "seed": cfg.seed,
    }
    res = Result(tables={"wexler_raz": [row]})
    if not row["agree"]:
        res.code, res.message = EXIT_TOLERANCE, "biorthogonality and reconstruction disagree"
    return res


def _dual(cfg):
    lat = cfg.lattice
    S = build_generator(cfg.gen, cfg)
    rep = gf.frame_bounds(S, lat, seed=cfg.seed)
    if not rep.is_frame:
        raise gf.NotAFrameError(f"not-a-frame: A={rep.A:.3e}, B={rep.B:.3e}")
    Ginv = gf.inverse_frame_operator(S, lat)
    R = S @ Ginv
    I = np.eye(lat.L)
    r_sr = float(np.linalg.norm(gf.periodize(S.conj().T @ R, lat) - I, 2))
    r_rs = float(np.linalg.norm(gf.periodize(R.conj().T @ S, lat) - I, 2))
    c = spreading_of(Ginv)
    off = float(np.abs(c[~lat.adjoint().mask()]).max(initial=0.0)) / hs_norm(Ginv)
    res = Result(tables={"dual": [{
        "L": lat.L, "lattice": lat.spec(), "A": rep.A, "B": rep.B,
        "residual_DS_CR": r_sr, "residual_DR_CS": r_rs,
        "inverse_off_adjoint": off, "seed": cfg.seed,
    }]})
    res.files["dual.op"] = ggio.dumps(R, "op")
    if cfg.figures:
        res.files["dual_inverse_spreading.png"] = plotting.phase_space_image(
            np.abs(c), "|spreading of inverse frame operator|",
            lat.adjoint().point_array, "magnitude")
    worst = max(r_sr, r_rs, off)
    if worst > cfg.tol:
        res.code, res.message = EXIT_TOLERANCE, f"dual residual {worst:.3e} exceeds {cfg.tol:g}"
    return res


def _probe_signals(cfg):
    if cfg.signal:
        _, psi = ggio.load(_resolve(cfg.signal, cfg.base_dir), "signal")
        if psi.shape[0] != cfg.L:
            raise ConfigError("signal", f"length {psi.shape[0]} does not match L={cfg.L}")
        return [psi]
    rng = np.random.default_rng(cfg.seed)
    return [gen.random_signal(cfg.L, rng) for _ in range(cfg.probes)]


def _reconstruct(cfg):
    lat = cfg.lattice
    S = build_generator(cfg.gen, cfg)
    R = gf.canonical_dual(S, lat)
    rows = []
    for i, psi in enumerate(_probe_signals(cfg)):
        n = np.linalg.norm(psi)
        e1 = np.linalg.norm(gf.synthesis(S, lat, gf.analysis(R, lat, psi)) - psi) / n
        e2 = np.linalg.norm(gf.synthesis(R, lat, gf.analysis(S, lat, psi)) - psi) / n
        rows.append({"probe_index": i, "norm": float(n), "error_DS_CR": float(e1),
                     "error_DR_CS": float(e2), "L": lat.L, "lattice": lat.spec(), "seed": cfg.seed})
    res = Result(tables={"reconstruct": rows})
    worst = max(max(r["error_DS_CR"], r["error_DR_CS"]) for r in rows)
    if worst > cfg.tol:
        res.code, res.message = EXIT_TOLERANCE, f"reconstruction error {worst:.3e} exceeds {cfg.tol:g}"
    return res


def _cohen(cfg):
    S = build_generator(cfg.gen, cfg)
    psi = _probe_signals(cfg)[0]
    Q = gf.cohen_map(S, psi)
    expected = cfg.L * hs_norm(S) ** 2 * float(np.linalg.norm(psi)) ** 2
    total = float(Q.sum())
    rel = abs(total - expected) / expected if expected > 0 else abs(total)
    grid_rows = [{f"l{l}": float(Q[k, l]) for l in range(cfg.L)} for k in range(cfg.L)]
    res = Result(tables={
        "cohen_summary": [{"L": cfg.L, "sum": total, "expected": expected,
                           "relative_error": rel, "seed": cfg.seed}],
    })
    res.files["cohen.csv"] = csv_text(grid_rows)
    if cfg.figures:
        res.files["cohen.png"] = plotting.phase_space_image(Q, "Cohen class energy ||alpha_z(S) psi||^2",
                                                            label="energy")
    if rel > cfg.tol:
        res.code, res.message = EXIT_TOLERANCE, f"Cohen sum rule off by {rel:.3e}"
    return res


def _norm_equiv(cfg):
    lat = cfg.lattice
    S = build_generator(cfg.gen, cfg)
    ne = norm_equivalence_experiment(S, lat, cfg.p, cfg.weight, cfg.probes, cfg.seed)
    rep = gf.frame_bounds(S, lat, seed=cfg.seed)
    summary = {"C_emp": ne.C_emp, "D_emp": ne.D_emp, "A": rep.A, "B": rep.B,
               "is_frame": rep.is_frame, "p": cfg.p, "weight": cfg.weight.spec(),
               "lattice": lat.spec(), "L": lat.L, "seed": cfg.seed}
    res = Result(tables={"norm_equiv": list(ne.rows()), "norm_equiv_summary": [summary]})
    if cfg.figures:
        res.files["norm_equiv.png"] = plotting.ratio_histogram(ne.ratios, ne.C_emp, ne.D_emp)
    if cfg.p == 2 and cfg.weight.kind == "constant":
        r2 = ne.ratios ** 2
        if np.any(r2 < rep.A / lat.L - cfg.tol) or np.any(r2 > rep.B / lat.L + cfg.tol):
            res.code, res.message = EXIT_TOLERANCE, "p=2 ratios escape the frame-bound sandwich"
    return res


def _svd_windows(cfg):
    S = build_generator(cfg.gen, cfg)
    ws = gen.svd_to_multiwindow(S)
    rows = [{"n": n, "weight": float(s), "file": f"window_{n}.signal"}
            for n, s in enumerate(ws.weights)]
    res = Result(tables={"svd_windows": rows or [{"n": "", "weight": "", "file": ""}]})
    for n, w in enumerate(ws.windows):
        res.files[f"window_{n}.signal"] = ggio.dumps(w, "signal")
    if cfg.figures:
        res.files["svd_windows.png"] = plotting.windows(ws)
    return res


def _adjoint_lattice(cfg):
    lat = cfg.lattice
    adj = lat.adjoint()
    return Result(tables={"adjoint_lattice": [{
        "L": lat.L, "lattice": lat.spec(), "adjoint": adj.spec(), "card": lat.card,
        "adjoint_card": adj.card, "product": lat.card * adj.card,
        "product_ok": lat.card * adj.card == lat.L ** 2,
    }]})


def _periodic_fourier(cfg):
    lat = cfg.lattice
    if cfg.op:
        _, T = ggio.load(_resolve(cfg.op, cfg.base_dir), "op")
        if T.shape[0] != cfg.L:
            raise ConfigError("op", f"dimension {T.shape[0]} does not match L={cfg.L}")
    else:
        T = gf.periodize(build_generator(cfg.gen, cfg), lat)
    coeffs = fourier_series_of_periodic(T, lat)
    rows = [{"k": k, "l": l, "coefficient": v} for (k, l), v in coeffs.items()]
    c = spreading_of(T)
    scale = hs_norm(T)
    off = float(np.abs(c[~lat.adjoint().mask()]).max(initial=0.0))
    res = Result(tables={"periodic_fourier": rows})
    if scale > 0 and off > cfg.tol * scale:
        res.code, res.message = EXIT_TOLERANCE, f"off-adjoint coefficient {off:.3e}"
    return res


_RUNNERS = {
    "frame-bounds": _frame_bounds,
    "janssen": _janssen,
    "wexler-raz": _wexler_raz,
    "dual": _dual,
    "reconstruct": _reconstruct,
    "cohen": _cohen,
    "norm-equiv": _norm_equiv,
    "svd-windows": _svd_windows,
    "adjoint-lattice": _adjoint_lattice,
    "periodic-fourier": _periodic_fourier,
}

_PRECONDITION_ERRORS = (
    ConfigError, ggio.FormatError, LatticeError, DimensionError, gf.NotAFrameError,
    NotPeriodicError, gen.NotUnderspreadError, ValueError,
)


def run(command: str, config: dict, base_dir=None) -> Result:
    """Run one experiment; never raises for bad input, the exit code says it."""
    try:
        cfg = ExperimentConfig.from_mapping({**config, "command": command}, base_dir)
        res = _RUNNERS[cfg.command](cfg)
    except _PRECONDITION_ERRORS as exc:
        return Result(code=EXIT_PRECONDITION, message=str(exc))
    except gf.FrameBoundsError as exc:
        return Result(code=EXIT_TOLERANCE, message=str(exc))
    if cfg.json:
        res.files[f"{cfg.command.replace('-', '_')}.json"] = json_text(res.tables)
    else:
        for name, rows in res.tables.items():
            res.files[f"{name}.csv"] = csv_text(rows)
    return res


def write_outputs(res: Result, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, content in sorted(res.files.items()):
        path = out / name
        if isinstance(content, bytes):
            path.write_bytes(content)
        else:
            path.write_text(content)


# --------------------------------------------------------------------------
# argument parsing

_COLUMNS = {
    "frame-bounds": "columns: L, lattice, A (lower bound = min eigenvalue of the g-frame operator), "
                    "B (max eigenvalue), tightness (B/A), janssen_residual (relative Frobenius gap "
                    "between periodization of S*S and its Janssen series), dual_residual (spectral "
                    "norm of D_S C_R - I for the canonical dual R, empty when not a frame), "
                    "is_frame, seed.  Files: frame_bounds.csv, frame_bounds.txt (key=value); "
                    "figures frame_bounds_spectrum.png, frame_bounds_spreading.png.",
    "janssen": "columns: L, lattice, card, adjoint, adjoint_card, janssen_residual, seed.",
    "wexler-raz": "columns: L, lattice, T (generator spec or canonical-dual), biorth_ok, recon_ok, "
                  "biorth_residual (max deviation of spreading of S*T from delta/card on the adjoint "
                  "lattice), recon_residual (spectral norm of sum alpha(S*T) - I), biorth_ok_swapped, "
                  "recon_ok_swapped (roles of S and T exchanged), agree, seed.",
    "dual": "columns: L, lattice, A, B, residual_DS_CR, residual_DR_CS (spectral norms of the two "
            "reconstruction identities minus I), inverse_off_adjoint (largest spreading coefficient "
            "of the inverse frame operator off the adjoint lattice, relative to its HS norm), seed.  "
            "Files: dual.op (ggf-op), dual.csv; figure dual_inverse_spreading.png.",
    "reconstruct": "columns: probe_index, norm, error_DS_CR, error_DR_CS (relative round-trip "
                   "errors), L, lattice, seed.  Uses --signal if given, else --probes seeded probes.",
    "cohen": "columns: L, sum, expected (L*||S||_HS^2*||psi||^2), relative_error, seed.  "
             "File cohen.csv holds the L x L table Q[k, l] (row k, column l); figure cohen.png.",
    "norm-equiv": "norm_equiv columns: seed, probe_index, ratio, p, s, lattice, L (the last probe is "
                  "the smallest eigenvector of the g-frame operator).  norm_equiv_summary columns: "
                  "C_emp, D_emp, A, B, is_frame, p, weight, lattice, L, seed; figure norm_equiv.png.",
    "svd-windows": "columns: n, weight (singular value), file (window_<n>.signal in --out); "
                   "figure svd_windows.png.",
    "adjoint-lattice": "columns: L, lattice, adjoint, card, adjoint_card, product, product_ok.",
    "periodic-fourier": "columns: k, l, coefficient (re+imj) for every adjoint-lattice point.  "
                        "T comes from --op, else the periodization of --gen over the lattice.",
}

_GEN_HELP = ("generator: gaussian | box:w | file:path | random:rank[:seed] | "
             "multiwindow:W+W+... | locop:MASK[:W] (MASK = tile | ones | zero | path.csv) | "
             "underspread:k,l;k,l[@c1,c2] (W = gaussian | box:w | file:path)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file (flags override it)")
    p.add_argument("--L", type=int, help="signal length (default 12)")
    p.add_argument("--lattice", help="sep:a,b or gen:(k1,l1);(k2,l2) (default sep:2,3)")
    p.add_argument("--gen", help=_GEN_HELP)
    p.add_argument("--gen2", help="second generator T for wexler-raz (default: canonical dual)")
    p.add_argument("--signal", help="ggf-signal file used as psi")
    p.add_argument("--op", help="ggf-op file used as T for periodic-fourier")
    p.add_argument("--p", help="sequence-norm exponent (1..inf)")
    p.add_argument("--weight", help="const | poly:s | file:path.csv")
    p.add_argument("--probes", type=int, help="number of random probes (default 20)")
    p.add_argument("--seed", type=int, help="seed for every random draw (default 0)")
    p.add_argument("--tol", type=float, help="numerical tolerance for exit code 3")
    p.add_argument("--out", help="directory for report files")
    p.add_argument("--json", action="store_const", const=True, help="JSON instead of CSV")
    p.add_argument("--figures", action="store_const", const=True,
                   help="also render PNG figures into --out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ggf", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--batch", metavar="DIR",
                        help="run every *.cfg in DIR concurrently; outputs go to OUT/<name>/")
    parser.add_argument("--out", dest="batch_out", metavar="OUT",
                        help="batch output root (default DIR/results)")
    parser.add_argument("--workers", type=int, default=None, help="batch worker processes")
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name in COMMANDS:
        sp = sub.add_parser(name, help=_COLUMNS[name].split(". ")[0].rstrip("."),
                            description=_COLUMNS[name])
        _add_common(sp)
    return parser


def _run_config_file(path: str, out_root: str):
    path = Path(path)
    try:
        cfg = read_config_file(path)
    except ConfigError as exc:
        return path.stem, EXIT_PRECONDITION, str(exc)
    res = run(cfg.get("command", ""), cfg, base_dir=path.parent)
    out = Path(out_root) / path.stem
    write_outputs(res, out)
    if res.message:
        (out / "error.txt").write_text(res.message + "\n")
    return path.stem, res.code, res.message


def run_batch(directory, out_root=None, workers=None) -> int:
    directory = Path(directory)
    files = sorted(directory.glob("*.cfg"))
    if not files:
        print(f"ggf: no *.cfg files in {directory}", file=sys.stderr)
        return EXIT_PRECONDITION
    out_root = Path(out_root) if out_root else directory / "results"
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run_config_file, map(str, files), [str(out_root)] * len(files)))
    worst = EXIT_OK
    for stem, code, msg in results:
        print(f"{stem}: exit {code}" + (f" ({msg})" if msg else ""))
        worst = max(worst, code)
    return worst


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.batch:
        return run_batch(args.batch, args.batch_out, args.workers)
    if not args.command:
        parser.print_help()
        return EXIT_PRECONDITION
    raw = {}
    base_dir = Path.cwd()
    if args.config:
        try:
            raw = read_config_file(args.config)
        except ConfigError as exc:
            print(f"ggf: {exc}", file=sys.stderr)
            return EXIT_PRECONDITION
        base_dir = Path(args.config).parent
    flags = {k: v for k, v in vars(args).items()
             if k in DEFAULTS and v is not None}
    raw.update(flags)
    res = run(args.command, raw, base_dir=base_dir)
    if res.code == EXIT_PRECONDITION:
        print(f"ggf: {res.message}", file=sys.stderr)
        return res.code
    out = flags.get("out", raw.get("out"))
    if out:
        write_outputs(res, out)
    as_json = raw.get("json") in (True, "true", "1", "yes", "on")
    sys.stdout.write(res.render(as_json))
    if res.message:
        print(f"ggf: {res.message}", file=sys.stderr)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
