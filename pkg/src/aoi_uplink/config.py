"""JSON experiment documents and their validation.

A config document is a single JSON object; see README for the schema.
Validation errors carry the dotted path of the offending field so the CLI
can exit with a precise diagnostic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .model import ArrivalKind, MarkovArrivalParams, NodeParams
from .sim import ExperimentConfig, PolicySpec

SWEEP_PARAMETERS = ("lam", "p", "omega", "n")


class ConfigError(Exception):
    """A config document failed to parse or validate."""


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple


def load_config_file(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top-level config must be a JSON object")
    return doc


def _require(mapping, key, path):
    if key not in mapping:
        raise ConfigError(f"{path}: missing required field {key!r}")
    return mapping[key]


def _number(value, path, lo=None, hi=None, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(f"{path}: must be >= {lo}, got {value}")
    if hi is not None and value > hi:
        raise ConfigError(f"{path}: must be <= {hi}, got {value}")
    return int(value) if integer else float(value)


def _node_from(entry, path):
    if not isinstance(entry, dict):
        raise ConfigError(f"{path}: expected an object with lam/p/omega")
    lam = _number(_require(entry, "lam", path), f"{path}.lam", lo=0.0, hi=1.0)
    p = _number(_require(entry, "p", path), f"{path}.p", lo=0.0, hi=1.0)
    omega = _number(entry.get("omega", 1.0), f"{path}.omega", lo=0.0)
    for key in entry:
        if key not in ("lam", "p", "omega"):
            raise ConfigError(f"{path}.{key}: unknown node field")
    try:
        return NodeParams(lam=lam, p=p, omega=omega)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_network(doc):
    network = _require(doc, "network", "config")
    if not isinstance(network, dict):
        raise ConfigError("network: expected an object")
    if "nodes" in network:
        entries = network["nodes"]
        if not isinstance(entries, list) or not entries:
            raise ConfigError("network.nodes: expected a non-empty array")
        return tuple(_node_from(e, f"network.nodes[{i}]") for i, e in enumerate(entries))
    if "n" in network:
        n = _number(network["n"], "network.n", lo=1, integer=True)
        template = {k: v for k, v in network.items() if k != "n"}
        node = _node_from(template, "network")
        return tuple(node for _ in range(n))
    raise ConfigError("network: missing required field 'nodes' (or symmetric 'n')")


def _per_node(value, n, path, lo=0.0, hi=1.0):
    if isinstance(value, list):
        if len(value) != n:
            raise ConfigError(f"{path}: expected {n} entries, got {len(value)}")
        return [_number(v, f"{path}[{i}]", lo=lo, hi=hi) for i, v in enumerate(value)]
    return [_number(value, path, lo=lo, hi=hi)] * n


def _parse_arrivals(doc, n):
    arrivals = doc.get("arrivals", {"kind": "bernoulli"})
    if not isinstance(arrivals, dict):
        raise ConfigError("arrivals: expected an object")
    kind = arrivals.get("kind", "bernoulli")
    if kind == "bernoulli":
        return ArrivalKind.BERNOULLI, None
    if kind != "markov":
        raise ConfigError(f"arrivals.kind: expected 'bernoulli' or 'markov', got {kind!r}")
    lam0 = _per_node(_require(arrivals, "lam0", "arrivals"), n, "arrivals.lam0")
    lam1 = _per_node(_require(arrivals, "lam1", "arrivals"), n, "arrivals.lam1")
    markov = tuple(MarkovArrivalParams(a, b) for a, b in zip(lam0, lam1))
    return ArrivalKind.MARKOV, markov


def _parse_policy(doc, n):
    policy = _require(doc, "policy", "config")
    if not isinstance(policy, dict):
        raise ConfigError("policy: expected an object")
    name = _require(policy, "name", "policy")
    kwargs = {}
    if "beta" in policy:
        beta = policy["beta"]
        kwargs["beta"] = (
            beta if isinstance(beta, str) else tuple(_per_node(beta, n, "policy.beta", hi=None))
        )
    if "mu" in policy:
        mu = policy["mu"]
        kwargs["mu"] = (
            mu if isinstance(mu, str) else tuple(_per_node(mu, n, "policy.mu"))
        )
    for key in policy:
        if key not in ("name", "beta", "mu"):
            raise ConfigError(f"policy.{key}: unknown policy field")
    try:
        return PolicySpec(name=name, **kwargs)
    except ValueError as exc:
        raise ConfigError(f"policy: {exc}") from exc


def _parse_randomize(doc):
    randomize = doc.get("randomize")
    if randomize is None:
        return None
    if not isinstance(randomize, dict):
        raise ConfigError("randomize: expected an object of parameter ranges")
    out = []
    for name in ("omega", "p", "lam"):  # draw order is part of the contract
        if name not in randomize:
            continue
        rng = randomize[name]
        if not isinstance(rng, list) or len(rng) != 2:
            raise ConfigError(f"randomize.{name}: expected [lo, hi]")
        lo = _number(rng[0], f"randomize.{name}[0]", lo=0.0)
        hi = _number(rng[1], f"randomize.{name}[1]", lo=0.0)
        out.append((name, lo, hi))
    for key in randomize:
        if key not in ("omega", "p", "lam"):
            raise ConfigError(f"randomize.{key}: unknown parameter")
    return tuple(out)


def _parse_sweep(doc, config):
    sweep = doc.get("sweep")
    if sweep is None:
        return None
    if not isinstance(sweep, dict):
        raise ConfigError("sweep: expected an object")
    parameter = _require(sweep, "parameter", "sweep")
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(
            f"sweep.parameter: expected one of {SWEEP_PARAMETERS}, got {parameter!r}"
        )
    values = _require(sweep, "values", "sweep")
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.values: expected a non-empty array")
    if parameter == "n":
        values = tuple(
            _number(v, f"sweep.values[{i}]", lo=1, integer=True) for i, v in enumerate(values)
        )
        if len(set(config.nodes)) != 1:
            raise ConfigError("sweep.parameter: an 'n' sweep needs a symmetric network")
        if not isinstance(config.policy.beta, str) or not isinstance(config.policy.mu, str):
            raise ConfigError("sweep.parameter: an 'n' sweep cannot use explicit per-node values")
    else:
        hi = None if parameter == "omega" else 1.0
        values = tuple(
            _number(v, f"sweep.values[{i}]", lo=0.0, hi=hi) for i, v in enumerate(values)
        )
    # every sweep value must itself yield a valid config
    for v in values:
        apply_sweep_value(config, parameter, v)
    return SweepSpec(parameter=parameter, values=values)


def parse_experiment(doc):
    """Validate a config document into (ExperimentConfig, SweepSpec | None)."""
    nodes = _parse_network(doc)
    n = len(nodes)
    policy = _parse_policy(doc, n)
    kind, markov = _parse_arrivals(doc, n)
    horizon = _number(_require(doc, "horizon", "config"), "horizon", lo=1, integer=True)
    runs = _number(_require(doc, "runs", "config"), "runs", lo=1, integer=True)
    seed = _number(_require(doc, "seed", "config"), "seed", lo=0, integer=True)
    burn_in = _number(doc.get("burn_in", 0), "burn_in", lo=0, integer=True)
    randomize = _parse_randomize(doc)
    for key in doc:
        if key not in (
            "network", "policy", "arrivals", "horizon", "runs", "seed",
            "burn_in", "randomize", "sweep", "comment",
        ):
            raise ConfigError(f"{key}: unknown config field")
    try:
        config = ExperimentConfig(
            nodes=nodes,
            policy=policy,
            horizon=horizon,
            runs=runs,
            base_seed=seed,
            arrival_kind=kind,
            markov=markov,
            burn_in=burn_in,
            randomize=randomize,
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    sweep = _parse_sweep(doc, config)
    return config, sweep


def apply_sweep_value(config: ExperimentConfig, parameter, value) -> ExperimentConfig:
    """One sweep point: the parameter applied symmetrically to every node."""
    try:
        if parameter == "n":
            return replace(config, nodes=tuple(config.nodes[0] for _ in range(int(value))))
        nodes = tuple(
            NodeParams(**{**{"lam": q.lam, "p": q.p, "omega": q.omega}, parameter: value})
            for q in config.nodes
        )
        return replace(config, nodes=nodes)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"sweep value {value!r} for {parameter!r}: {exc}") from exc
