import json

import pytest

from aoi_uplink.cli import main
from aoi_uplink.config import (
    ConfigError,
    apply_sweep_value,
    load_config_file,
    parse_experiment,
)
from aoi_uplink.model import ArrivalKind


MINIMAL = {
    "network": {"nodes": [{"lam": 1.0, "p": 1.0}]},
    "policy": {"name": "rs", "mu": [1.0]},
    "horizon": 200,
    "runs": 2,
    "seed": 7,
}


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


# --- parsing and validation -----------------------------------------------------


def test_parse_minimal_config():
    config, sweep = parse_experiment(MINIMAL)
    assert config.n_nodes == 1
    assert config.policy.name == "rs"
    assert sweep is None


def test_symmetric_network_shorthand():
    doc = dict(MINIMAL, network={"n": 4, "lam": 0.3, "p": 0.5, "omega": 2.0})
    doc["policy"] = {"name": "rr"}
    config, _ = parse_experiment(doc)
    assert config.n_nodes == 4
    assert all(q.lam == 0.3 and q.omega == 2.0 for q in config.nodes)


def test_missing_field_is_named():
    doc = {"network": {"nodes": [{"lam": 0.5}]}, "policy": {"name": "rr"},
           "horizon": 10, "runs": 1, "seed": 0}
    with pytest.raises(ConfigError) as err:
        parse_experiment(doc)
    assert "'p'" in str(err.value)
    assert "network.nodes[0]" in str(err.value)


def test_bad_values_are_located():
    doc = dict(MINIMAL, horizon=0)
    with pytest.raises(ConfigError, match="horizon"):
        parse_experiment(doc)
    doc = dict(MINIMAL, policy={"name": "warp"})
    with pytest.raises(ConfigError, match="warp"):
        parse_experiment(doc)
    doc = dict(MINIMAL, policy={"name": "rs", "mu": [0.5, 0.5]})
    with pytest.raises(ConfigError, match="policy.mu"):
        parse_experiment(doc)
    doc = dict(MINIMAL, unknown_field=1)
    with pytest.raises(ConfigError, match="unknown_field"):
        parse_experiment(doc)


def test_markov_arrivals_parse():
    doc = dict(
        MINIMAL,
        network={"n": 2, "lam": 0.5, "p": 0.8},
        policy={"name": "pomw"},
        arrivals={"kind": "markov", "lam0": 0.2, "lam1": [0.6, 0.7]},
    )
    config, _ = parse_experiment(doc)
    assert config.arrival_kind is ArrivalKind.MARKOV
    assert config.markov[0].lam0 == 0.2
    assert config.markov[1].lam1 == 0.7


def test_sweep_parse_and_apply():
    doc = dict(
        MINIMAL,
        network={"n": 2, "lam": 0.5, "p": 0.8},
        policy={"name": "pomw"},
        sweep={"parameter": "lam", "values": [0.1, 0.5, 1.0]},
    )
    config, sweep = parse_experiment(doc)
    assert sweep.values == (0.1, 0.5, 1.0)
    point = apply_sweep_value(config, "lam", 0.1)
    assert all(q.lam == 0.1 for q in point.nodes)

    doc["sweep"] = {"parameter": "n", "values": [2, 5]}
    config, sweep = parse_experiment(doc)
    assert apply_sweep_value(config, "n", 5).n_nodes == 5

    doc["sweep"] = {"parameter": "lam", "values": [0.0]}
    with pytest.raises(ConfigError):
        parse_experiment(doc)


def test_load_config_file_diagnostics(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"network": }')
    with pytest.raises(ConfigError, match="broken.json:1:"):
        load_config_file(str(path))


# --- CLI ------------------------------------------------------------------------


def test_simulate_minimal(tmp_path, capsys):
    config = write_config(tmp_path, MINIMAL)
    code = main(["simulate", "--config", config, "--out", str(tmp_path / "out")])
    assert code == 0
    rows = (tmp_path / "out" / "simulate.csv").read_text().splitlines()
    header, row = rows[0].split(","), rows[1].split(",")
    record = dict(zip(header, row))
    assert record["policy"] == "rs"
    assert float(record["ewsaoi_mean"]) == 2.0
    assert record["lambda"] == "1"
    assert float(record["r_rs_star"]) == 2.0
    assert float(record["lower_bound"]) == 2.0


def test_simulate_missing_field_exits_2(tmp_path, capsys):
    doc = {"network": {"nodes": [{"lam": 0.5}]}, "policy": {"name": "rr"},
           "horizon": 10, "runs": 1, "seed": 0}
    config = write_config(tmp_path, doc)
    code = main(["simulate", "--config", config, "--out", str(tmp_path / "out")])
    assert code == 2
    err = capsys.readouterr().err
    assert "'p'" in err


def test_simulate_byte_identical(tmp_path):
    doc = dict(
        MINIMAL,
        network={"n": 2, "lam": 0.4, "p": 0.8},
        policy={"name": "pomw"},
        horizon=500,
        runs=3,
    )
    config = write_config(tmp_path, doc)
    code = main(["simulate", "--config", config, "--out", str(tmp_path / "a")])
    assert code == 0
    code = main(["simulate", "--config", config, "--out", str(tmp_path / "b")])
    assert code == 0
    a = (tmp_path / "a" / "simulate.csv").read_bytes()
    b = (tmp_path / "b" / "simulate.csv").read_bytes()
    assert a == b


def test_seed_override_changes_output(tmp_path):
    doc = dict(MINIMAL, network={"n": 2, "lam": 0.4, "p": 0.8}, policy={"name": "pomw"},
               horizon=400, runs=3)
    config = write_config(tmp_path, doc)
    main(["simulate", "--config", config, "--out", str(tmp_path / "a")])
    main(["simulate", "--config", config, "--out", str(tmp_path / "b"), "--seed", "123"])
    a = (tmp_path / "a" / "simulate.csv").read_text()
    b = (tmp_path / "b" / "simulate.csv").read_text()
    assert a != b


def test_bounds_command(tmp_path):
    doc = {
        "network": {"n": 2, "lam": 0.5, "p": 0.8},
        "policy": {"name": "rs", "mu": [0.5, 0.5]},
        "horizon": 10,
        "runs": 1,
        "seed": 0,
    }
    config = write_config(tmp_path, doc)
    code = main(["bounds", "--config", config, "--out", str(tmp_path / "out")])
    assert code == 0
    rows = (tmp_path / "out" / "bounds.csv").read_text().splitlines()
    record = dict(zip(rows[0].split(","), rows[1].split(",")))
    assert float(record["r_rs_star"]) == 4.5
    assert float(record["rs_ewsaoi"]) == 4.5
    assert float(record["lower_bound"]) == 2.75
    assert float(record["pomw_middle_bound"]) == 6.0
    assert float(record["r_rsm"]) == 7.0
    assert float(record["guarantee"]) == 4.0
    assert record["mu_star"] == "0.5;0.5"


def test_bounds_rejects_markov(tmp_path):
    doc = dict(
        MINIMAL,
        network={"n": 2, "lam": 0.5, "p": 0.8},
        policy={"name": "pomw"},
        arrivals={"kind": "markov", "lam0": 0.2, "lam1": 0.6},
    )
    config = write_config(tmp_path, doc)
    assert main(["bounds", "--config", config, "--out", str(tmp_path / "out")]) == 2


def test_bounds_degeneration_at_lam_one(tmp_path):
    doc = {
        "network": {"n": 2, "lam": 1.0, "p": 0.8},
        "policy": {"name": "pomw"},
        "horizon": 10, "runs": 1, "seed": 0,
    }
    config = write_config(tmp_path, doc)
    assert main(["bounds", "--config", config, "--out", str(tmp_path / "out")]) == 0
    rows = (tmp_path / "out" / "bounds.csv").read_text().splitlines()
    record = dict(zip(rows[0].split(","), rows[1].split(",")))
    assert record["pomw_middle_bound"] == record["r_rsm"] == record["r_rs_star"]


def test_sweep_command(tmp_path):
    doc = dict(
        MINIMAL,
        network={"n": 2, "lam": 0.5, "p": 0.8},
        policy={"name": "mwa"},
        horizon=300,
        runs=2,
        sweep={"parameter": "lam", "values": [0.2, 0.6, 1.0]},
    )
    config = write_config(tmp_path, doc)
    code = main(["sweep", "--config", config, "--out", str(tmp_path / "out")])
    assert code == 0
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    assert len(lines) == 4
    assert lines[0].startswith("sweep_parameter,sweep_value,policy")

    # sweep command requires the sweep field
    del doc["sweep"]
    config = write_config(tmp_path, doc, "nosweep.json")
    assert main(["sweep", "--config", config, "--out", str(tmp_path / "out")]) == 2


def test_validate_command(tmp_path, capsys):
    config = write_config(tmp_path, MINIMAL)
    assert main(["validate", "--config", config]) == 0
    assert "config ok" in capsys.readouterr().out
    bad = write_config(tmp_path, dict(MINIMAL, runs=0), "bad.json")
    assert main(["validate", "--config", bad]) == 2


def test_figure_command_small(tmp_path):
    code = main(
        ["figure", "fig7", "--out", str(tmp_path / "out"),
         "--runs", "2", "--horizon", "60", "--parallel", "2"]
    )
    assert code == 0
    csv_path = tmp_path / "out" / "fig7.csv"
    png_path = tmp_path / "out" / "fig7.png"
    assert csv_path.exists() and png_path.exists()
    lines = csv_path.read_text().splitlines()
    # 8 sweep points x 3 policies + header
    assert len(lines) == 25

    # chart regeneration from the same CSV is byte-identical
    from aoi_uplink.charts import render_chart

    render_chart(csv_path, tmp_path / "again.png")
    assert (tmp_path / "again.png").read_bytes() == png_path.read_bytes()


def test_figure_unknown_name(tmp_path, capsys):
    assert main(["figure", "fig99", "--out", str(tmp_path)]) == 2
    assert "fig99" in capsys.readouterr().err


def test_fig3_lower_bound_curve_non_increasing(tmp_path):
    # The universal lower bound falls while the arrival caps bind and then
    # flattens once the throughput constraint takes over.
    code = main(
        ["figure", "fig3", "--out", str(tmp_path / "out"), "--runs", "1", "--horizon", "20"]
    )
    assert code == 0
    import csv

    with open(tmp_path / "out" / "fig3.csv", newline="") as fh:
        rows = [r for r in csv.DictReader(fh) if r["series"] == "lower bound"]
    rows.sort(key=lambda r: float(r["sweep_value"]))
    values = [float(r["value"]) for r in rows]
    assert len(values) == 10
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_figure_fig8_randomized(tmp_path):
    code = main(
        ["figure", "fig8", "--out", str(tmp_path / "out"), "--runs", "2", "--horizon", "40"]
    )
    assert code == 0
    import csv

    with open(tmp_path / "out" / "fig8.csv", newline="") as fh:
        record = next(csv.DictReader(fh))
    assert record["omega"] == "U(0.1..1.9)"
    assert record["p"] == "U(0.1..0.9)"
