"""``ineq-bias`` batch front-end.

Reads a JSON model configuration and writes indices, exact biases, Monte
Carlo validation results, or the merged bias table as JSON or CSV.

Exit codes: 0 success, 2 configuration error, 3 computation limit exceeded,
4 validation failure. Errors are written to stderr as a JSON object with
``code``, ``message`` and ``context``.
"""

import argparse
import csv
import io
import json
import os
import sys

from . import bias, indices, mixture, montecarlo
from .errors import CompositionLimitError, IneqBiasError, ParameterError, QuadratureError
from .quadrature import QuadratureConfig

THREADS_ENV = "INEQ_BIAS_THREADS"
DEFAULT_REPLICATES = 20000
DEFAULT_SEED = 0

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_LIMIT = 3
EXIT_VALIDATION = 4


class ConfigError(ParameterError):
    code = "invalid_config"


class RunConfig:
    """Validated run configuration.

    Accepts either a single model (``pi``, ``alpha``, ``lambda`` at the top
    level) or a ``models`` list of such objects.
    """

    def __init__(self, models, ns, eps, quadrature, replicates, seed, fmt, limit):
        self.models = models
        self.ns = ns
        self.eps = eps
        self.quadrature = quadrature
        self.replicates = replicates
        self.seed = seed
        self.format = fmt
        self.limit = limit

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a JSON object")
        model_specs = raw.get("models")
        if model_specs is None:
            model_specs = [raw]
        if not isinstance(model_specs, list) or not model_specs:
            raise ConfigError("'models' must be a nonempty list")
        models = []
        for i, model_spec in enumerate(model_specs):
            missing = [key for key in ("pi", "alpha", "lambda") if key not in model_spec]
            if missing:
                raise ConfigError(f"model {i} is missing {', '.join(missing)}", model=i)
            try:
                models.append(mixture.canonicalize(model_spec["pi"], model_spec["alpha"], model_spec["lambda"]))
            except IneqBiasError as exc:
                exc.context.setdefault("model", i)
                raise

        ns = raw.get("n", [])
        ns = ns if isinstance(ns, list) else [ns]
        for n in ns:
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ConfigError("every n must be an integer >= 1", n=n)

        eps = raw.get("eps", [])
        eps = eps if isinstance(eps, list) else [eps]
        for e in eps:
            if isinstance(e, bool) or not isinstance(e, (int, float)) or e < 0 or e == 1:
                raise ConfigError("eps values must be numbers >= 0 and != 1", eps=e)

        qraw = raw.get("quadrature", {}) or {}
        if not isinstance(qraw, dict):
            raise ConfigError("'quadrature' must be an object")
        unknown = set(qraw) - {"rel_tol", "abs_tol", "truncation", "max_subdivisions"}
        if unknown:
            raise ConfigError(f"unknown quadrature settings: {sorted(unknown)}")
        try:
            quadrature = QuadratureConfig(**qraw)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, IneqBiasError):
                raise
            raise ConfigError(f"bad quadrature settings: {exc}") from None

        mc = raw.get("mc", {}) or {}
        replicates = mc.get("replicates", DEFAULT_REPLICATES)
        seed = mc.get("seed", DEFAULT_SEED)
        fmt = raw.get("format", "json")
        limit = raw.get("composition_limit", bias.DEFAULT_COMPOSITION_LIMIT)
        if isinstance(limit, bool) or not isinstance(limit, int) or limit < 1:
            raise ConfigError("composition_limit must be a positive integer", value=limit)
        cfg = cls(models, [int(n) for n in ns], [float(e) for e in eps], quadrature,
                  replicates, seed, fmt, limit)
        cfg._check_run_settings()
        return cfg

    def _check_run_settings(self):
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be 'json' or 'csv'", format=self.format)
        if isinstance(self.replicates, bool) or not isinstance(self.replicates, int) \
                or self.replicates < montecarlo.MIN_REPLICATES:
            raise ConfigError(f"replicates must be an integer >= {montecarlo.MIN_REPLICATES}",
                              replicates=self.replicates)
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer", seed=self.seed)

    def require_ns(self, command):
        if not self.ns:
            raise ConfigError(f"'{command}' needs at least one sample size in 'n'")


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", path=str(path)) from None
    except json.JSONDecodeError as exc:
        err = ConfigError(f"config is not valid JSON: {exc.msg}", path=str(path),
                          line=exc.lineno, column=exc.colno)
        err.code = "config_parse_error"
        raise err from None
    return RunConfig.from_dict(raw)


def cmd_indices(cfg):
    records = []
    for i, params in enumerate(cfg.models):
        rec = {"model": i, **params.to_dict(), **indices.index_report(params).to_dict()}
        if cfg.eps:
            rec["atkinson_eps"] = {repr(e): indices.atkinson_eps(params, e) for e in cfg.eps}
        records.append(rec)
    return records


def cmd_bias(cfg, threads=1):
    cfg.require_ns("bias")
    records = []
    for i, params in enumerate(cfg.models):
        for n in cfg.ns:
            report = bias.bias_report(params, n, cfg.quadrature, cfg.limit, workers=threads)
            for row in report:
                records.append({"model": i, **row.to_dict()})
    return records


def cmd_validate(cfg, threads=1):
    cfg.require_ns("validate")
    records = []
    grid = montecarlo.run_grid(cfg.models, cfg.ns, bias.ESTIMATOR_IDS, cfg.replicates,
                               cfg.seed, threads=threads, cfg=cfg.quadrature)
    for i, rep in grid:
        records.append({"model": i, **rep.to_dict()})
    return records


def cmd_table(cfg, threads=1):
    """Bias rows merged with each model's population indices, keyed by (estimator, n)."""
    cfg.require_ns("table")
    index_by_model = {rec["model"]: rec for rec in cmd_indices(cfg)}
    records = []
    for row in cmd_bias(cfg, threads):
        idx = index_by_model[row["model"]]
        records.append({
            "model": row["model"],
            "estimator": row["estimator"],
            "n": row["n"],
            "pi": idx["pi"],
            "alpha": idx["alpha"],
            "lambda": idx["lambda"],
            "population": row["population"],
            "expectation": row["expectation"],
            "bias": row["bias"],
            "quadrature_error": row["quadrature_error"],
        })
    return records


COMMANDS = {
    "indices": lambda cfg, threads: cmd_indices(cfg),
    "bias": cmd_bias,
    "validate": cmd_validate,
    "table": cmd_table,
}


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (list, tuple)):
        return " ".join(_csv_cell(v) for v in value)
    return str(value)


def _flatten(record):
    flat = {}
    for key, value in record.items():
        if isinstance(value, dict):
            for sub, v in value.items():
                flat[f"{key}_{sub}"] = v
        else:
            flat[key] = value
    return flat


def render(command, records, fmt):
    if fmt == "json":
        return json.dumps({"command": command, "records": records}, indent=2) + "\n"
    rows = [_flatten(r) for r in records]
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _error(exc):
    if isinstance(exc, (CompositionLimitError, QuadratureError)):
        status = EXIT_LIMIT
    else:
        status = EXIT_CONFIG
    payload = {"code": exc.code, "message": exc.message, "context": exc.context}
    if isinstance(exc, QuadratureError):
        payload["context"] = {**exc.context, "partial_value": exc.value,
                              "error_estimate": exc.error}
    sys.stderr.write(json.dumps(payload, default=str) + "\n")
    return status


def _threads(arg):
    if arg is not None:
        return arg
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer", value=env) from None
    return 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ineq-bias",
        description="Inequality indices and exact estimator biases for gamma mixtures.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON model configuration")
    parser.add_argument("--format", choices=["json", "csv"], help="output format")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed")
    parser.add_argument("--replicates", type=int, help="Monte Carlo replicates per cell")
    parser.add_argument("--threads", type=int,
                        help=f"worker threads (default: ${THREADS_ENV} or 1)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.format:
            cfg.format = args.format
        if args.seed is not None:
            cfg.seed = args.seed
        if args.replicates is not None:
            cfg.replicates = args.replicates
        cfg._check_run_settings()
        threads = _threads(args.threads)
        records = COMMANDS[args.command](cfg, threads)
    except IneqBiasError as exc:
        return _error(exc)

    text = render(args.command, records, cfg.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "validate" and not all(r["passed"] for r in records):
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
