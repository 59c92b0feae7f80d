"""Experiment harness: critical-sparsity sweeps and WAV compress/recover.

A sweep plants S-sparse DCT coefficient vectors, compresses each with a
per-trial random matrix and runs every configured method on the same
instance, recording the recovered sparsity T and whether T = S with a
feasible residual.  Instances derive from the master seed, the sparsity
level and the trial index only, so results are reproducible and
independent of method order or parallel execution.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import baselines, maxfs, metrics, pipeline, wavio
from .baselines import GreedyStop, IrwlsConfig
from .maxfs import MaxFsConfig

DEFAULT_METHODS = (
    "bp",
    "mp",
    "omp",
    "pfp",
    "irwls",
    "maxfs-weighted",
    "maxfs-elastic",
    "maxfs-staged",
)

SIGNAL_SOURCES = ("synthetic_lowpass", "synthetic_highpass")
LOWPASS_BAND = 100  # first DCT indices counted as low frequency
HIGHPASS_ENERGY = 0.95  # fraction of support energy above the band
VALUE_FLOOR = 1e-3  # planted magnitudes stay clear of the nonzero tolerance


@dataclass
class ExperimentConfig:
    n: int = 256
    compression_ratio: float = 50.0
    matrix_kind: str = "rgm"
    s_grid: tuple = tuple(range(10, 85, 5))
    trials_per_s: int = 10
    methods: tuple = DEFAULT_METHODS
    seed: int = 0
    signal_source: str = "synthetic_lowpass"
    jobs: int = 1
    energy_gate: bool = False
    threshold_factor: float = 1.3
    maxfs: MaxFsConfig = field(default_factory=MaxFsConfig)
    stops: GreedyStop = field(default_factory=GreedyStop)
    irwls: IrwlsConfig = field(default_factory=IrwlsConfig)

    @property
    def m(self):
        return int(round(self.n * (1.0 - self.compression_ratio / 100.0)))

    def validate(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.compression_ratio < 100:
            raise ValueError("compression_ratio must lie in [0, 100)")
        if self.m < 1 or self.m > self.n:
            raise ValueError(f"invalid measurement count m = {self.m}")
        if self.matrix_kind not in pipeline.MATRIX_KINDS:
            raise ValueError(f"matrix_kind must be one of {pipeline.MATRIX_KINDS}")
        if any(s >= self.m for s in self.s_grid):
            raise ValueError("every sweep sparsity must stay below m")
        if any(s < 1 for s in self.s_grid):
            raise ValueError("sweep sparsities must be positive")
        if self.trials_per_s < 1:
            raise ValueError("trials_per_s must be positive")
        unknown = [name for name in self.methods if name not in DEFAULT_METHODS]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")
        return self


@dataclass
class SweepRow:
    s: int
    t_average: dict
    successes: dict


@dataclass
class MethodSummary:
    tot_succ: int
    min_m_ratio: float | None  # m / largest fully successful S, None = FAIL
    gm: float
    lp_solves: int


@dataclass
class SweepResult:
    config: ExperimentConfig
    rows: list
    summary: dict
    trials: list


def build_registry(cfg):
    """Method name -> callable(phi, y, planted) -> RecoveryResult.

    The planted coefficient vector is passed only so that test stubs can
    fake an ideal or hopeless recoverer; the real methods ignore it.
    """
    tol = cfg.maxfs.nonzero_tol
    return {
        "bp": lambda phi, y, a=None: baselines.basis_pursuit(phi, y, nonzero_tol=tol),
        "mp": lambda phi, y, a=None: baselines.matching_pursuit(
            phi, y, cfg.stops, nonzero_tol=tol
        ),
        "omp": lambda phi, y, a=None: baselines.orthogonal_matching_pursuit(
            phi, y, cfg.stops, nonzero_tol=tol
        ),
        "pfp": lambda phi, y, a=None: baselines.polytope_faces_pursuit(
            phi, y, cfg.stops, nonzero_tol=tol
        ),
        "irwls": lambda phi, y, a=None: baselines.reweighted_least_squares(
            phi, y, cfg.irwls, nonzero_tol=tol
        ),
        "maxfs-weighted": lambda phi, y, a=None: maxfs.weighted_maxfs(phi, y, cfg.maxfs),
        "maxfs-elastic": lambda phi, y, a=None: maxfs.elastic_maxfs(phi, y, cfg.maxfs),
        "maxfs-staged": lambda phi, y, a=None: maxfs.staged_maxfs(phi, y, cfg.maxfs),
    }


def _stream_seed(master, s, trial, stream):
    seq = np.random.SeedSequence([int(master), int(s), int(trial), stream])
    return int(seq.generate_state(1, np.uint64)[0])


def synthetic_coefficients(cfg, s, trial):
    """Plant an S-sparse DCT coefficient vector for one trial."""
    rng = np.random.default_rng(_stream_seed(cfg.seed, s, trial, 1))
    n = cfg.n
    band = min(LOWPASS_BAND, n)
    if cfg.signal_source == "synthetic_lowpass":
        if s > band:
            raise ValueError(f"low-pass sparsity {s} exceeds the {band}-index band")
        support = rng.choice(band, size=s, replace=False)
        values = _safe_values(rng, s)
    elif cfg.signal_source == "synthetic_highpass":
        if n <= band:
            raise ValueError("high-pass source needs n above the low band")
        n_low = min(int(0.05 * s), band)
        n_high = s - n_low
        if n_high > n - band:
            raise ValueError(f"high-pass sparsity {s} exceeds the available band")
        high = band + rng.choice(n - band, size=n_high, replace=False)
        low = rng.choice(band, size=n_low, replace=False)
        support = np.concatenate([high, low]).astype(int)
        values = _safe_values(rng, s)
        if n_low:
            # cap the low-band share of the energy at 1 - HIGHPASS_ENERGY
            e_high = float(np.sum(values[:n_high] ** 2))
            e_low = float(np.sum(values[n_high:] ** 2))
            cap = e_high * (1.0 - HIGHPASS_ENERGY) / HIGHPASS_ENERGY
            if e_low > cap:
                values[n_high:] *= np.sqrt(cap / e_low)
    else:
        support, values = _wav_coefficients(cfg, s, rng)
    a = np.zeros(n)
    a[support] = values
    return a


def _safe_values(rng, s):
    values = rng.standard_normal(s)
    # planted magnitudes below the nonzero tolerance would make T = S
    # undecidable; resample the (rare) tiny draws
    while np.any(np.abs(values) < VALUE_FLOOR):
        small = np.abs(values) < VALUE_FLOOR
        values[small] = rng.standard_normal(int(np.sum(small)))
    return values


_WAV_CACHE = {}


def _wav_coefficients(cfg, s, rng):
    """Top-S DCT coefficients of a random frame of the source WAV."""
    path = cfg.signal_source
    key = (path, cfg.n, cfg.energy_gate)
    if key not in _WAV_CACHE:
        signal, _rate = wavio.read_wav(path)
        segments = pipeline.segment(signal, cfg.n)
        if cfg.energy_gate:
            full_rms = float(np.sqrt(np.mean(signal * signal)))
            segments = pipeline.energy_gate(segments, full_rms)
        specs = [pipeline.dct_forward(seg.samples) for seg in segments]
        _WAV_CACHE[key] = [c for c in specs if np.count_nonzero(c) > 0]
    frames = _WAV_CACHE[key]
    if not frames:
        raise ValueError(f"no usable frames in {path}")
    for _ in range(64):
        coeffs = frames[int(rng.integers(len(frames)))]
        order = np.argsort(-np.abs(coeffs), kind="stable")
        support = np.sort(order[:s])
        values = coeffs[support]
        if np.all(np.abs(values) >= VALUE_FLOOR * np.max(np.abs(values))):
            return support, values
    return support, values


def run_trial(cfg, s, trial, registry=None):
    """All configured methods on the shared instance for (s, trial)."""
    registry = registry or build_registry(cfg)
    a = synthetic_coefficients(cfg, s, trial)
    spec = pipeline.MeasurementSpec(
        kind=cfg.matrix_kind,
        m=cfg.m,
        n=cfg.n,
        seed=_stream_seed(cfg.seed, s, trial, 2),
    )
    phi = pipeline.measurement_matrix(spec)
    y = phi @ a
    feas_tol = 1e-6 * (1.0 + float(np.linalg.norm(y)))
    y_scale = float(np.max(np.abs(y), initial=0.0))
    records = []
    for name in cfg.methods:
        start = time.perf_counter()
        result = registry[name](phi, y, a)
        elapsed = time.perf_counter() - start
        ok = metrics.is_success(result.t_sparsity, s) and (
            result.residual_norm <= feas_tol
        )
        records.append(
            metrics.TrialRecord(
                method=name,
                input_s=s,
                recovered_t=result.t_sparsity,
                success=ok,
                runtime=elapsed,
                lp_solves=result.stats.lp_solves,
                residual_inf=float(np.max(np.abs(phi @ result.x - y), initial=0.0)),
                y_scale=y_scale,
            )
        )
    return records


def _run_trial_star(args):
    cfg, s, trial = args
    return (s, trial), run_trial(cfg, s, trial)


def run_sweep(cfg, registry=None):
    """Full sweep over cfg.s_grid with trials_per_s trials per level."""
    cfg.validate()
    tasks = [(s, trial) for s in cfg.s_grid for trial in range(cfg.trials_per_s)]
    results = {}
    if cfg.jobs > 1 and registry is None:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for key, records in pool.map(
                _run_trial_star, [(cfg, s, t) for s, t in tasks]
            ):
                results[key] = records
    else:
        for s, trial in tasks:
            results[(s, trial)] = run_trial(cfg, s, trial, registry)
    all_records = []
    rows = []
    for s in cfg.s_grid:
        t_avg = {}
        succ = {}
        per_method = {name: [] for name in cfg.methods}
        for trial in range(cfg.trials_per_s):
            for rec in results[(s, trial)]:
                per_method[rec.method].append(rec)
                all_records.append(rec)
        for name in cfg.methods:
            recs = per_method[name]
            t_avg[name] = float(np.mean([r.recovered_t for r in recs]))
            succ[name] = sum(r.success for r in recs)
        rows.append(SweepRow(s=s, t_average=t_avg, successes=succ))
    summary = summarize(cfg, rows, all_records)
    return SweepResult(config=cfg, rows=rows, summary=summary, trials=all_records)


def summarize(cfg, rows, records):
    summary = {}
    for name in cfg.methods:
        tot = sum(row.successes[name] for row in rows)
        full = [row.s for row in rows if row.successes[name] == cfg.trials_per_s]
        ratio = cfg.m / max(full) if full else None
        gm = metrics.geometric_mean([row.t_average[name] for row in rows])
        solves = sum(r.lp_solves or 0 for r in records if r.method == name)
        summary[name] = MethodSummary(
            tot_succ=tot, min_m_ratio=ratio, gm=gm, lp_solves=solves
        )
    return summary


def sweep_csv(result):
    """Render a SweepResult as the documented CSV text."""
    cfg = result.config
    header = ["S"]
    for name in cfg.methods:
        header.append(f"{name}_T_avg")
        header.append(f"{name}_succ")
    lines = [",".join(header)]
    for row in result.rows:
        cells = [str(row.s)]
        for name in cfg.methods:
            cells.append(_fmt(row.t_average[name]))
            cells.append(str(row.successes[name]))
        lines.append(",".join(cells))
    tot = ["TOT_SUCC"]
    min_m = ["MIN_M"]
    gm = ["GM"]
    for name in cfg.methods:
        s = result.summary[name]
        tot.extend([str(s.tot_succ), ""])
        min_m.extend([_fmt(s.min_m_ratio) if s.min_m_ratio is not None else "FAIL", ""])
        gm.extend([_fmt(s.gm), ""])
    lines.extend([",".join(tot), ",".join(min_m), ",".join(gm)])
    return "\n".join(lines) + "\n"


def _fmt(x):
    return format(float(x), ".10g")


@dataclass
class SegmentReport:
    index: int
    s_sparsity: int
    recovered_t: int


@dataclass
class WavReport:
    segments: list
    rse: float
    runtime: float
    sample_rate: int
    total_s: int
    total_t: int


def run_recover_wav(in_path, out_path, cfg, method=None):
    """Compress and recover a 16-bit PCM mono WAV end to end.

    One measurement matrix (seeded from cfg.seed) is shared by all
    frames; compression_ratio 0 switches to an identity matrix for
    debugging.  The report's RSE is recomputed from the written file
    against the processed input.
    """
    cfg.validate()
    method = method or cfg.methods[0]
    registry = build_registry(cfg)
    if method not in registry:
        raise ValueError(f"unknown method {method!r}")
    recover = registry[method]
    start = time.perf_counter()
    signal, rate = wavio.read_wav(in_path)
    segments = pipeline.segment(signal, cfg.n)
    if cfg.energy_gate:
        full_rms = float(np.sqrt(np.mean(signal * signal)))
        if full_rms > 0.0:
            segments = pipeline.energy_gate(segments, full_rms)
        else:
            segments = []
        if not segments:
            raise ValueError("no voiced frames after the energy gate")
        segments = [
            pipeline.Segment(index=i, samples=seg.samples, pad_len=seg.pad_len)
            for i, seg in enumerate(segments)
        ]
    if cfg.compression_ratio == 0:
        phi = np.eye(cfg.n)
    else:
        phi = pipeline.measurement_matrix(
            pipeline.MeasurementSpec(cfg.matrix_kind, cfg.m, cfg.n, cfg.seed)
        )
    reports = []
    recovered = []
    for seg in segments:
        sparse = pipeline.sparsify(pipeline.dct_forward(seg.samples), cfg.threshold_factor)
        y = pipeline.compress(phi, sparse.coeffs)
        result = recover(phi, y, sparse.coeffs)
        reports.append(
            SegmentReport(
                index=seg.index,
                s_sparsity=sparse.s_sparsity,
                recovered_t=result.t_sparsity,
            )
        )
        recovered.append((seg.index, result.x))
    pad_len = segments[-1].pad_len
    out_signal = pipeline.reconstruct(recovered, pad_len=pad_len)
    wavio.write_wav(out_path, out_signal, rate)
    written, _ = wavio.read_wav(out_path)
    reference = np.concatenate([seg.samples for seg in segments])
    if pad_len:
        reference = reference[:-pad_len]
    error = metrics.rse(written, reference)
    return WavReport(
        segments=reports,
        rse=error,
        runtime=time.perf_counter() - start,
        sample_rate=rate,
        total_s=sum(r.s_sparsity for r in reports),
        total_t=sum(r.recovered_t for r in reports),
    )


def segment_csv(report):
    lines = ["segment,S,T"]
    for seg in report.segments:
        lines.append(f"{seg.index},{seg.s_sparsity},{seg.recovered_t}")
    return "\n".join(lines) + "\n"


def run_compress_wav(in_path, out_prefix, cfg):
    """Emit per-frame measurement vectors plus the matrix recipe."""
    cfg.validate()
    signal, rate = wavio.read_wav(in_path)
    segments = pipeline.segment(signal, cfg.n)
    phi = pipeline.measurement_matrix(
        pipeline.MeasurementSpec(cfg.matrix_kind, cfg.m, cfg.n, cfg.seed)
    )
    rows = []
    meta = []
    for seg in segments:
        sparse = pipeline.sparsify(pipeline.dct_forward(seg.samples), cfg.threshold_factor)
        rows.append(pipeline.compress(phi, sparse.coeffs))
        meta.append((seg.index, sparse.s_sparsity, seg.pad_len))
    y_path = f"{out_prefix}.y.txt"
    write_matrix_file(y_path, np.vstack(rows))
    spec_path = f"{out_prefix}.phi.txt"
    with open(spec_path, "w", encoding="utf-8") as handle:
        handle.write(f"kind={cfg.matrix_kind}\n")
        handle.write(f"m={cfg.m}\n")
        handle.write(f"n={cfg.n}\n")
        handle.write(f"seed={cfg.seed}\n")
        handle.write(f"sample_rate={rate}\n")
        handle.write(f"threshold_factor={cfg.threshold_factor}\n")
    seg_path = f"{out_prefix}.segments.csv"
    with open(seg_path, "w", encoding="utf-8") as handle:
        handle.write("segment,S,pad_len\n")
        for index, s, pad in meta:
            handle.write(f"{index},{s},{pad}\n")
    return y_path, spec_path, seg_path


def write_matrix_file(path, matrix):
    """Plain text matrix: first line 'rows cols', then row-major values."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{matrix.shape[0]} {matrix.shape[1]}\n")
        for row in matrix:
            handle.write(" ".join(format(v, ".17g") for v in row) + "\n")


def read_matrix_file(path):
    with open(path, "r", encoding="utf-8") as handle:
        tokens = handle.read().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: expected a 'rows cols' header")
    rows, cols = int(tokens[0]), int(tokens[1])
    values = [float(t) for t in tokens[2:]]
    if len(values) != rows * cols:
        raise ValueError(
            f"{path}: expected {rows * cols} values, found {len(values)}"
        )
    return np.array(values).reshape(rows, cols)


def config_from_mapping(mapping):
    """Build an ExperimentConfig from flat key=value strings."""
    cfg = ExperimentConfig()
    maxfs_cfg = {}
    stops_cfg = {}
    irwls_cfg = {}
    simple = {}
    for key, raw in mapping.items():
        if key in _MAXFS_KEYS:
            maxfs_cfg[key] = _MAXFS_KEYS[key](raw)
        elif key in _STOP_KEYS:
            target, conv = _STOP_KEYS[key]
            stops_cfg[target] = conv(raw)
        elif key in _IRWLS_KEYS:
            target, conv = _IRWLS_KEYS[key]
            irwls_cfg[target] = conv(raw)
        elif key in _CONFIG_KEYS:
            simple[key] = _CONFIG_KEYS[key](raw)
        else:
            raise ValueError(f"unknown configuration key {key!r}")
    cfg = replace(cfg, **simple)
    if maxfs_cfg:
        cfg = replace(cfg, maxfs=replace(cfg.maxfs, **maxfs_cfg))
    if stops_cfg:
        cfg = replace(cfg, stops=replace(cfg.stops, **stops_cfg))
    if irwls_cfg:
        cfg = replace(cfg, irwls=replace(cfg.irwls, **irwls_cfg))
    return cfg


def _parse_bool(raw):
    value = str(raw).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"cannot parse boolean from {raw!r}")


def _parse_int_list(raw):
    if isinstance(raw, (list, tuple)):
        return tuple(int(v) for v in raw)
    return tuple(int(tok) for tok in str(raw).replace(",", " ").split())


def _parse_str_list(raw):
    if isinstance(raw, (list, tuple)):
        return tuple(str(v) for v in raw)
    return tuple(tok for tok in str(raw).replace(",", " ").split())


def _parse_optional_int(raw):
    text = str(raw).strip().lower()
    if text in ("", "none"):
        return None
    return int(raw)


_CONFIG_KEYS = {
    "n": int,
    "compression_ratio": float,
    "matrix_kind": lambda v: str(v).strip().lower(),
    "s_grid": _parse_int_list,
    "trials_per_s": int,
    "methods": _parse_str_list,
    "seed": int,
    "signal_source": str,
    "jobs": int,
    "energy_gate": _parse_bool,
    "threshold_factor": float,
}

_MAXFS_KEYS = {
    "list_length": int,
    "support_weight": float,
    "nonzero_tol": float,
    "zero_obj_tol": float,
    "max_support": _parse_optional_int,
}

_STOP_KEYS = {
    "max_sparsity": ("max_sparsity", _parse_optional_int),
    "residual_tol": ("residual_tol", float),
    "theta_min": ("theta_min", float),
}

_IRWLS_KEYS = {
    "irwls_p": ("p", float),
    "eps_initial": ("eps_initial", float),
    "eps_shrink": ("eps_shrink", float),
    "eps_floor": ("eps_floor", float),
    "inner_tol": ("inner_tol", float),
    "max_outer": ("max_outer", int),
}

CONFIG_KEY_NAMES = (
    tuple(_CONFIG_KEYS) + tuple(_MAXFS_KEYS) + tuple(_STOP_KEYS) + tuple(_IRWLS_KEYS)
)
