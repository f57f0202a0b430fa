"""Batch command line front end.

Five subcommands drive the library end to end:

* ``certify``   — constants, spectral splitting, dimension certificates;
* ``simulate``  — one seeded trajectory with norm/far-field CSV output;
* ``spectrum``  — eigenvalues, characteristic roots, dichotomy constant;
* ``squeeze``   — seeded trajectory pairs, measured vs analytic contraction;
* ``report``    — merge the JSON artifacts of a directory into a summary.

Exit codes: 0 success, 2 configuration error, 3 infeasible certificate,
4 numerical divergence.

Reproducibility contract: all randomness flows through a single
``numpy.random.Generator`` seeded with PCG64 (documented, counter-based,
cross-platform stable); JSON is emitted with sorted keys, CSV uses repr
floats with '.' decimals and LF line endings; files are written atomically
(temp file + rename).  Rerunning a subcommand with the same manifest
produces byte-identical payloads; the manifest records their sha256 hashes
and carries the only timestamp, which is excluded from hashing.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import hashlib
import json
import math
import os
import struct
import sys
import tempfile

import numpy as np

from . import __version__
from .estimates import absorbing_time, compute_estimates, verify_far_field
from .model import (
    ConfigError,
    Grid,
    ProblemParameters,
    RunOptions,
    check_dissipativity,
    evaluate_forcing,
    parse_config,
)
from .semigroup import Field, field_norm
from .solver import (
    CutoffRadius,
    DivergenceError,
    HistorySegment,
    far_field_mass,
    integrate,
    segment_at,
    segment_norm,
)
from .spectrum import dichotomy_constant, spectral_partition, with_dichotomy
from .squeezing import make_projections, measure_contraction
from .dimension import optimize_certificate

__all__ = [
    "RunManifest",
    "cmd_certify",
    "cmd_report",
    "cmd_simulate",
    "cmd_spectrum",
    "cmd_squeeze",
    "eigenmode_pair",
    "main",
    "random_history",
    "random_pair",
]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_DIVERGENCE = 4

SNAPSHOT_MAGIC = b"DRDF"
SNAPSHOT_VERSION = 1

DISSIPATIVITY_CONDITION = "sigma*(L_f+1)*exp(mu*tau) - mu < 0"


# --- deterministic output helpers -------------------------------------------


def _atomic_write_bytes(path: str, payload: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sanitize(obj):
    """Replace non-finite floats so the JSON stays standard and stable."""
    if isinstance(obj, dict):
        return {key: _sanitize(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(value) for value in obj]
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        if math.isnan(obj):
            return "nan"
        return "inf" if obj > 0 else "-inf"
    return obj


def write_json(path: str, obj) -> None:
    text = json.dumps(_sanitize(obj), sort_keys=True, indent=2) + "\n"
    _atomic_write_bytes(path, text.encode("utf-8"))


def write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, (float, np.floating))
                              else str(v) for v in row))
    _atomic_write_bytes(path, ("\n".join(lines) + "\n").encode("utf-8"))


def write_snapshot(path: str, field_values: np.ndarray, half_length: float, t: float) -> None:
    """Binary field snapshot: little-endian magic 'DRDF', uint32 version,
    uint64 npoints, float64 half-length, float64 time, float64 values."""
    header = struct.pack("<4sIQdd", SNAPSHOT_MAGIC, SNAPSHOT_VERSION,
                         field_values.size, half_length, t)
    _atomic_write_bytes(path, header + np.asarray(field_values, dtype="<f8").tobytes())


def read_snapshot(path: str):
    with open(path, "rb") as handle:
        blob = handle.read()
    magic, version, npoints, half_length, t = struct.unpack_from("<4sIQdd", blob, 0)
    if magic != SNAPSHOT_MAGIC:
        raise ValueError("not a field snapshot file")
    if version != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {version}")
    values = np.frombuffer(blob, dtype="<f8", offset=struct.calcsize("<4sIQdd"),
                           count=npoints)
    return values.copy(), half_length, t


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


class RunManifest:
    """Provenance record of one subcommand run.

    The payload hash map covers every artifact written by the run; the
    timestamp lives only in the manifest and is excluded from hashing, so
    identical manifests imply byte-identical payloads.
    """

    def __init__(self, config_path: str, seed: int, subcommand: str, out_dir: str):
        self.config_path = config_path
        self.seed = seed
        self.subcommand = subcommand
        self.out_dir = out_dir
        self.version = __version__
        self.payloads: dict = {}

    def record(self, path: str) -> None:
        self.payloads[os.path.basename(path)] = _sha256(path)

    def write(self) -> None:
        doc = {
            "config_path": self.config_path,
            "seed": self.seed,
            "subcommand": self.subcommand,
            "out_dir": self.out_dir,
            "version": self.version,
            "payload_sha256": dict(sorted(self.payloads.items())),
            "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
        write_json(os.path.join(self.out_dir, "manifest.json"), doc)


# --- seeded ensembles --------------------------------------------------------


def random_history(rng: np.random.Generator, grid: Grid, tau: float,
                   steps_per_delay: int, norm: float, modes: int = 6,
                   support: float = None) -> HistorySegment:
    """Draw a smooth random history with a prescribed segment norm.

    The field is a Gaussian-envelope superposition of low trigonometric
    modes, blended smoothly in theta between two independent draws, then
    rescaled so that the segment sup-norm equals ``norm`` exactly.  The
    envelope keeps the far-field mass negligible on the working box.
    """
    x = grid.nodes
    L = grid.half_length
    support = L / 4.0 if support is None else support
    envelope = np.exp(-((x / support) ** 2))

    def draw_field() -> np.ndarray:
        coeffs = rng.standard_normal((modes, 2))
        field = np.zeros_like(x)
        for j in range(1, modes + 1):
            field += (coeffs[j - 1, 0] * np.cos(j * np.pi * x / L)
                      + coeffs[j - 1, 1] * np.sin(j * np.pi * x / L))
        return envelope * field

    f0, f1 = draw_field(), draw_field()
    thetas = np.linspace(-tau, 0.0, steps_per_delay + 1)
    weight = 0.5 * (1.0 + np.cos(np.pi * (thetas + tau) / tau))  # 1 at -tau, 0 at 0
    samples = np.outer(weight, f0) + np.outer(1.0 - weight, f1)
    seg = HistorySegment(samples, grid, tau, steps_per_delay)
    current = segment_norm(seg)
    if current == 0.0 or norm == 0.0:
        return HistorySegment(np.zeros_like(samples), grid, tau, steps_per_delay)
    return HistorySegment(samples * (norm / current), grid, tau, steps_per_delay)


def random_pair(rng: np.random.Generator, grid: Grid, tau: float,
                steps_per_delay: int, norm: float, separation: float,
                modes: int = 10, support: float = None):
    """A base history and a broadband perturbation of it.

    The perturbation mixes more (and higher) modes than the base so the
    difference has content in all three projection ranges; ``support``
    sets the Gaussian envelope width of the perturbation (default L/2.5).
    """
    phi = random_history(rng, grid, tau, steps_per_delay, norm)
    support = grid.half_length / 2.5 if support is None else support
    bump = random_history(rng, grid, tau, steps_per_delay, separation,
                          modes=modes, support=support)
    psi = HistorySegment(phi.samples + bump.samples, grid, tau, steps_per_delay)
    return phi, psi


def eigenmode_pair(rng: np.random.Generator, grid: Grid, p: ProblemParameters,
                   spectral, steps_per_delay: int, norm: float,
                   separation: float, modes_used: int = 6):
    """A pair whose difference lies in the span of the inside modes.

    The perturbation combines the first ``modes_used`` Dirichlet sine
    modes of Omega_K (zero-extended), each carried backward in theta by
    its own dominant decay rate, so the difference history is dynamically
    consistent with the linear flow.  This is the regime the contraction
    bounds describe; box-wide slowly-decaying content (which the inside
    splitting never sees) is deliberately excluded.
    """
    phi = random_history(rng, grid, p.tau, steps_per_delay, norm)
    K = spectral.K
    x = grid.nodes
    inside = np.abs(x) < K
    thetas = np.linspace(-p.tau, 0.0, steps_per_delay + 1)
    count = min(modes_used, len(spectral.mode_roots))
    bump = np.zeros((steps_per_delay + 1, grid.points))
    for j in range(1, count + 1):
        mode = np.zeros_like(x)
        mode[inside] = np.sin(j * math.pi * (x[inside] + K) / (2.0 * K))
        mr = spectral.mode_roots[j - 1]
        rho_j = max((r.real for r in mr.roots if r.imag == 0),
                    default=mr.roots[0].real)
        bump += (rng.standard_normal() / j) * np.outer(np.exp(rho_j * thetas), mode)
    seg = HistorySegment(bump, grid, p.tau, steps_per_delay)
    scale = segment_norm(seg)
    if scale > 0:
        bump = bump * (separation / scale)
    psi = HistorySegment(phi.samples + bump, grid, p.tau, steps_per_delay)
    return phi, psi


# --- shared pipeline pieces ---------------------------------------------------


def _load_config(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    return parse_config(text)


def _forcing_norm(p: ProblemParameters, grid: Grid) -> float:
    return field_norm(Field(values=evaluate_forcing(p.forcing, grid.nodes), grid=grid))


def _spectral_bundle(p: ProblemParameters, grid: Grid, run: RunOptions, seed: int):
    CutoffRadius(run.cutoff_radius).validate(grid)
    spectral = spectral_partition(p, run.cutoff_radius, run.m_cut, run.modes)
    dichotomy = None
    if spectral.rho_m < 0:
        rng = np.random.default_rng(np.random.PCG64(seed))
        dichotomy = dichotomy_constant(p, spectral, run.dichotomy_samples, rng=rng)
        spectral = with_dichotomy(spectral, dichotomy["K_m"])
    return spectral, dichotomy


# --- subcommands --------------------------------------------------------------


def cmd_certify(config_path: str, seed: int, out_dir: str, parallel: int = 1) -> int:
    """Full certification pipeline: estimates, spectrum, dimension bounds."""
    p, grid, run = _load_config(config_path)
    os.makedirs(out_dir, exist_ok=True)
    manifest = RunManifest(config_path, seed, "certify", out_dir)

    norm_g = _forcing_norm(p, grid)
    est = compute_estimates(p, norm_g, norm_phi0=run.history_norm)
    T_D = absorbing_time(p, est, norm_D=run.history_norm)
    gate = check_dissipativity(p)
    diagnostics = []
    if not gate.holds:
        diagnostics.append(
            f"dissipativity condition {DISSIPATIVITY_CONDITION} violated: "
            f"beta={gate.beta!r} >= mu={p.mu!r}"
        )

    est_doc = est.as_dict()
    est_doc.update(T_D=T_D, norm_D=run.history_norm,
                   dissipativity_condition=DISSIPATIVITY_CONDITION)
    est_path = os.path.join(out_dir, "estimates.json")
    write_json(est_path, est_doc)
    manifest.record(est_path)

    spectral, dichotomy = _spectral_bundle(p, grid, run, seed)
    spec_doc = spectral.as_dict()
    if dichotomy is not None:
        spec_doc["dichotomy"] = dichotomy
    spec_path = os.path.join(out_dir, "spectrum.json")
    write_json(spec_path, spec_doc)
    manifest.record(spec_path)

    cert_doc = {}
    if spectral.K_m is not None and est.energy_feasible and est.dissipative:
        hausdorff = optimize_certificate(p, spectral, est, mode="hausdorff")
        fractal = optimize_certificate(p, spectral, est, mode="fractal")
        cert_doc["hausdorff"] = hausdorff.as_dict()
        cert_doc["fractal"] = fractal.as_dict()
        if not hausdorff.feasible:
            diagnostics.append("no feasible Hausdorff certificate (eta >= 1 everywhere)")
        if not fractal.feasible:
            diagnostics.append("no feasible fractal certificate (zeta >= 1 everywhere)")
    else:
        if spectral.K_m is None:
            diagnostics.append("spectral splitting unavailable (rho_m >= 0)")
        if not est.energy_feasible:
            diagnostics.append("energy gap mu - sigma - 1 <= 0: c1/c4/c5 infeasible")
    cert_doc["diagnostics"] = diagnostics
    cert_doc["feasible"] = not diagnostics
    cert_path = os.path.join(out_dir, "certificate.json")
    write_json(cert_path, cert_doc)
    manifest.record(cert_path)
    manifest.write()

    if diagnostics:
        for line in diagnostics:
            print(f"infeasible: {line}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_simulate(config_path: str, seed: int, out_dir: str, parallel: int = 1,
                 snapshot_every: int = None) -> int:
    """Integrate one seeded trajectory and export norm/far-field CSVs plus
    the far-field threshold verdict at the configured tolerance."""
    p, grid, run = _load_config(config_path)
    os.makedirs(out_dir, exist_ok=True)
    manifest = RunManifest(config_path, seed, "simulate", out_dir)
    rng = np.random.default_rng(np.random.PCG64(seed))
    phi = random_history(rng, grid, p.tau, run.steps_per_delay, run.history_norm)

    try:
        traj = integrate(phi, run.horizon, p)
    except DivergenceError as exc:
        print(f"divergence at step {exc.step}", file=sys.stderr)
        return EXIT_DIVERGENCE

    K = run.cutoff_radius
    rows = []
    for n in range(traj.steps + 1):
        t = n * traj.dt
        seg = segment_at(traj, t)
        rows.append((t, field_norm(traj.field(n)), far_field_mass(seg, K)))
    norms_path = os.path.join(out_dir, "norms.csv")
    write_csv(norms_path, ("t", "norm_u", "farfield_mass"), rows)
    manifest.record(norms_path)

    radii = []
    radius = grid.half_length / 32.0
    while radius <= grid.half_length / 2.0 + 1e-12:
        radii.append(radius)
        radius *= 2.0
    ff_rows = []
    for n in range(0, traj.steps + 1, max(1, run.steps_per_delay // 2)):
        seg = segment_at(traj, n * traj.dt)
        ff_rows.append((n * traj.dt, *(far_field_mass(seg, K_i) for K_i in radii)))
    ff_path = os.path.join(out_dir, "farfield.csv")
    write_csv(ff_path, ("t", *(f"mass_K={K_i!r}" for K_i in radii)), ff_rows)
    manifest.record(ff_path)

    check_path = os.path.join(out_dir, "farfield_check.json")
    write_json(check_path, verify_far_field(traj, run.eps))
    manifest.record(check_path)

    every = run.snapshot_every if snapshot_every is None else snapshot_every
    if every and every > 0:
        for n in range(0, traj.steps + 1, every):
            snap_path = os.path.join(out_dir, f"field_{n:08d}.bin")
            write_snapshot(snap_path, traj.values[n], grid.half_length, n * traj.dt)
            manifest.record(snap_path)

    manifest.write()
    return EXIT_OK


def cmd_spectrum(config_path: str, seed: int, out_dir: str, parallel: int = 1) -> int:
    """Spectral data only: eigenvalues, roots, splitting, dichotomy."""
    p, grid, run = _load_config(config_path)
    os.makedirs(out_dir, exist_ok=True)
    manifest = RunManifest(config_path, seed, "spectrum", out_dir)
    spectral, dichotomy = _spectral_bundle(p, grid, run, seed)
    doc = spectral.as_dict()
    if dichotomy is not None:
        doc["dichotomy"] = dichotomy
    path = os.path.join(out_dir, "spectrum.json")
    write_json(path, doc)
    manifest.record(path)
    manifest.write()
    return EXIT_OK if spectral.certificate_ok else EXIT_INFEASIBLE


def cmd_squeeze(config_path: str, seed: int, out_dir: str, parallel: int = 1) -> int:
    """Measure P/Q/R contraction on seeded trajectory pairs."""
    p, grid, run = _load_config(config_path)
    os.makedirs(out_dir, exist_ok=True)
    manifest = RunManifest(config_path, seed, "squeeze", out_dir)

    norm_g = _forcing_norm(p, grid)
    est = compute_estimates(p, norm_g, norm_phi0=run.history_norm)
    spectral, _ = _spectral_bundle(p, grid, run, seed)
    if spectral.K_m is None or not est.dissipative or not est.energy_feasible:
        print("squeeze requires a dissipative configuration with rho_m < 0 "
              "and mu - sigma - 1 > 0", file=sys.stderr)
        return EXIT_INFEASIBLE
    ps = make_projections(grid, run.cutoff_radius, spectral.k_m)

    rng = np.random.default_rng(np.random.PCG64(seed))
    pairs = [eigenmode_pair(rng, grid, p, spectral, run.steps_per_delay,
                            norm=run.history_norm,
                            separation=0.3 * run.history_norm)
             for _ in range(run.ensemble)]

    jobs = [(phi, psi, t) for phi, psi in pairs for t in run.contraction_times]

    def job(args):
        phi, psi, t = args
        return measure_contraction(phi, psi, t, p, ps, spectral=spectral, est=est)

    if parallel > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=parallel) as pool:
            reports = list(pool.map(job, jobs))
    else:
        reports = [job(item) for item in jobs]

    rows = []
    worst = {"P": 0.0, "Q": 0.0, "R": 0.0}
    zero_diff = 0
    for rep in reports:
        if rep["status"] == "zero-difference":
            zero_diff += 1
            continue
        rows.append((rep["t"], rep["measured_P"], rep["bound_P"],
                     rep["measured_Q"], rep["bound_Q"],
                     rep["measured_R"], rep["bound_R"]))
        for part in ("P", "Q", "R"):
            ratio = rep[f"measured_{part}"] / rep[f"bound_{part}"]
            worst[part] = max(worst[part], ratio)
    csv_path = os.path.join(out_dir, "contraction.csv")
    write_csv(csv_path, ("t", "measured_P", "bound_P", "measured_Q", "bound_Q",
                         "measured_R", "bound_R"), rows)
    manifest.record(csv_path)

    summary = {
        "pairs": run.ensemble,
        "times": list(run.contraction_times),
        "zero_difference": zero_diff,
        "worst_ratio_P": worst["P"],
        "worst_ratio_Q": worst["Q"],
        "worst_ratio_R": worst["R"],
        "within_bounds": all(v <= 1.05 for v in worst.values()),
    }
    sq_path = os.path.join(out_dir, "squeeze.json")
    write_json(sq_path, summary)
    manifest.record(sq_path)
    manifest.write()
    return EXIT_OK if summary["within_bounds"] else EXIT_INFEASIBLE


def cmd_report(directory: str) -> int:
    """Merge the JSON artifacts of a directory into summary.csv/summary.txt."""
    wanted = ("estimates.json", "spectrum.json", "certificate.json")
    missing = [name for name in wanted
               if not os.path.exists(os.path.join(directory, name))]
    if missing:
        print("missing artifacts: " + ", ".join(missing), file=sys.stderr)
        return EXIT_CONFIG

    docs = {}
    for name in wanted:
        with open(os.path.join(directory, name), "r", encoding="utf-8") as handle:
            docs[name] = json.load(handle)
    squeeze_path = os.path.join(directory, "squeeze.json")
    if os.path.exists(squeeze_path):
        with open(squeeze_path, "r", encoding="utf-8") as handle:
            docs["squeeze.json"] = json.load(handle)

    est = docs["estimates.json"]
    spec = docs["spectrum.json"]
    cert = docs["certificate.json"]

    header = ["certificate", "feasible", "bound", "k_m", "t0", "free_parameter",
              "contraction"]
    rows = []
    for mode in ("hausdorff", "fractal"):
        if mode not in cert:
            continue
        c = cert[mode]
        free = c["alpha"] if mode == "hausdorff" else c["beta_free"]
        contraction = c["eta"] if mode == "hausdorff" else c["zeta"]
        rows.append((mode, str(c["feasible"]),
                     c[f"{mode}_bound"], c["k_m"], c["t0"], free, contraction))
    summary_csv = os.path.join(directory, "summary.csv")
    write_csv(summary_csv, header, rows)

    lines = ["certification summary", "====================="]
    lines.append(f"dissipative: {est['dissipative']} (beta={est['beta']}, "
                 f"condition: {est['dissipativity_condition']})")
    lines.append(f"absorbing radius c3: {est['c3']}  (T_D for norm {est['norm_D']}: "
                 f"{est['T_D']})")
    lines.append(f"splitting: k_m={spec['k_m']} rho1={spec['rho1']} "
                 f"rho_m={spec['rho_m']} K_m={spec['K_m']}")
    for mode, _, bound, k_m, t0, free, contraction in rows:
        lines.append(f"{mode}: bound={bound} (k_m={k_m}, t0={t0}, "
                     f"free={free}, contraction={contraction})")
    if "squeeze.json" in docs:
        sq = docs["squeeze.json"]
        lines.append(f"squeeze: worst measured/bound ratios "
                     f"P={sq['worst_ratio_P']} Q={sq['worst_ratio_Q']} "
                     f"R={sq['worst_ratio_R']} within_bounds={sq['within_bounds']}")
    for line in cert.get("diagnostics", []):
        lines.append(f"diagnostic: {line}")
    summary_txt = os.path.join(directory, "summary.txt")
    _atomic_write_bytes(summary_txt, ("\n".join(lines) + "\n").encode("utf-8"))
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delayrd",
        description="certification toolkit for the delayed reaction-diffusion equation",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(sp):
        sp.add_argument("--config", required=True, help="path to JSON configuration")
        sp.add_argument("--seed", type=int, default=None,
                        help="PCG64 seed (overrides run.seed from the config)")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--parallel", type=int, default=1,
                        help="worker threads for ensemble members")

    add_common(sub.add_parser("certify", help="compute constants and dimension bounds"))
    simulate = sub.add_parser("simulate", help="integrate one seeded trajectory")
    add_common(simulate)
    simulate.add_argument("--snapshot-every", type=int, default=None,
                          help="write a binary field snapshot every K steps")
    add_common(sub.add_parser("spectrum", help="characteristic roots and splitting"))
    add_common(sub.add_parser("squeeze", help="measure contraction on seeded pairs"))
    report = sub.add_parser("report", help="merge artifacts into a summary")
    report.add_argument("--dir", required=True, help="artifact directory")
    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    try:
        _, _, run = _load_config(args.config)
        return run.seed
    except ConfigError:
        raise


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.subcommand == "report":
            return cmd_report(args.dir)
        seed = _resolve_seed(args)
        if args.subcommand == "certify":
            return cmd_certify(args.config, seed, args.out, args.parallel)
        if args.subcommand == "simulate":
            return cmd_simulate(args.config, seed, args.out, args.parallel,
                                snapshot_every=args.snapshot_every)
        if args.subcommand == "spectrum":
            return cmd_spectrum(args.config, seed, args.out, args.parallel)
        if args.subcommand == "squeeze":
            return cmd_squeeze(args.config, seed, args.out, args.parallel)
        raise AssertionError(f"unhandled subcommand {args.subcommand}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"divergence at step {exc.step}", file=sys.stderr)
        return EXIT_DIVERGENCE


if __name__ == "__main__":
    sys.exit(main())
