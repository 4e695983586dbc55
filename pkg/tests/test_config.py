import json
import logging
from pathlib import Path

import pytest

from su11sim.config import Settings, apply_overrides, config_hash, load_run_config
from su11sim.config.run_config import validate_run_config
from su11sim.errors import ConfigError
from su11sim.utils.logging_config import SWEEP_LOGGER, JSONFormatter, setup_logging
from su11sim.utils.performance import memoize
from su11sim.utils.validators import parse_gamma_range, validate_json_file, validate_output_dir


def test_defaults():
    config = load_run_config()

    assert config.device.variant.value == "compensated"
    assert config.pump.regime.value == "cw"
    assert config.grid.points == 257
    assert config.phi.count == 401 and not config.phi.endpoint
    assert config.gammas == [1.3]
    assert config.convergence.mode == "flag"
    assert config.filter is None


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("SU11_THREADS", "3")
    monkeypatch.setenv("SU11_LOG_FORMAT", "json")

    settings = Settings()

    assert settings.threads == 3
    assert settings.log_format == "json"


def test_overrides_parse_json_literals():
    data = apply_overrides({}, ["device.variant=noncompensated", "gammas=[0.5, 2]", "grid.points=65"])

    assert data == {"device": {"variant": "noncompensated"}, "gammas": [0.5, 2], "grid": {"points": 65}}


def test_override_without_value_rejected():
    with pytest.raises(ConfigError):
        apply_overrides({}, ["device.variant"])


def test_overrides_applied_on_top_of_file(toy_config_file):
    config = load_run_config(toy_config_file, ["pump.regime=pulsed", "gammas=[0.3]"])

    assert config.pump.regime.value == "pulsed"
    assert config.gammas == [0.3]
    assert config.grid.points == 129


def test_malformed_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "gammas": [1.0,\n}\n')

    with pytest.raises(ConfigError) as info:
        load_run_config(str(path))

    assert info.value.code == "malformed_json"
    assert info.value.details["line"] == 3
    assert info.value.exit_code == 2


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError) as info:
        load_run_config(str(tmp_path / "absent.json"))

    assert info.value.code == "missing_config"


@pytest.mark.parametrize(
    "data",
    [
        {"seed": {"kind": "coherent_plane_wave"}, "detection": {"kind": "direct"}},
        {"detection": {"kind": "homodyne"}},
        {"device": {"colour": "blue"}},
        {"phi": {"count": 32}},
        {"phi": {"start": 1.0, "stop": 0.5}},
        {"gammas": [1.0, -0.5]},
        {"grid": {"points": 8}},
        {"dispersion": {"file": "/nonexistent/dispersion.json"}},
        {"convergence": {"mode": "sometimes"}},
    ],
)
def test_invalid_configs_rejected(data):
    with pytest.raises(ConfigError) as info:
        validate_run_config(data)

    assert info.value.code == "invalid_config"
    assert info.value.details["errors"]


def test_config_hash_is_stable(toy_config_data):
    first = validate_run_config(toy_config_data)
    second = validate_run_config(json.loads(json.dumps(toy_config_data)))

    assert config_hash(first) == config_hash(second)
    assert len(config_hash(first)) == 12
    changed = validate_run_config(apply_overrides(toy_config_data, ["gammas=[0.05]"]))
    assert config_hash(changed) != config_hash(first)


def test_memoize_uses_explicit_key():
    calls = []

    @memoize(key=lambda values: tuple(values), maxsize=2)
    def total(values):
        calls.append(values)
        return sum(values)

    assert total([1, 2]) == 3
    assert total([1, 2]) == 3
    total([3])
    total([4])
    total([1, 2])

    assert len(calls) == 4
    assert total.cache_info()["hits"] == 1
    total.cache_clear()
    assert total.cache_info()["size"] == 0


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("0.1:10", {"valid": True, "start": 0.1, "stop": 10.0, "scale": "log", "count": 12}),
        ("0.1:1:lin:4", {"valid": True, "start": 0.1, "stop": 1.0, "scale": "lin", "count": 4}),
    ],
)
def test_parse_gamma_range(spec, expected):
    result = parse_gamma_range(spec)

    for key, value in expected.items():
        assert result[key] == value


@pytest.mark.parametrize("spec", ["1", "0:1", "2:1", "0.1:1:cubic", "0.1:1:lin:1", "a:b"])
def test_parse_gamma_range_errors(spec):
    result = parse_gamma_range(spec)

    assert not result["valid"]
    assert result["error"]


def test_validate_output_dir(tmp_path):
    target = tmp_path / "out" / "nested"

    assert validate_output_dir(str(target))["valid"]
    assert target.is_dir()

    blocker = tmp_path / "file.txt"
    blocker.write_text("x")
    assert not validate_output_dir(str(blocker))["valid"]


def test_validate_json_file(tmp_path):
    good = tmp_path / "good.json"
    good.write_text("[]")
    text = tmp_path / "table.txt"
    text.write_text("[]")

    assert validate_json_file(str(good))["valid"]
    assert validate_json_file(str(text))["error"].startswith("Unsupported format")
    assert validate_json_file(str(tmp_path / "none.json"))["error"] == "File not found"


def test_json_formatter():
    record = logging.LogRecord("su11sim.sweep", logging.INFO, __file__, 10, "gamma=%s", ("1.3",), None)

    payload = json.loads(JSONFormatter().format(record))

    assert payload["message"] == "gamma=1.3"
    assert payload["logger"] == "su11sim.sweep"
    assert payload["level"] == "INFO"


REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.mark.parametrize("name", sorted(p.name for p in (REPO_ROOT / "configs").glob("*.json")))
def test_shipped_configs_validate(monkeypatch, name):
    monkeypatch.chdir(REPO_ROOT)

    config = load_run_config(f"configs/{name}")

    assert config.gammas


def test_setup_logging_writes_rotating_files(tmp_path):
    setup_logging(log_level="DEBUG", log_dir=str(tmp_path), enable_console=False)
    logging.getLogger(SWEEP_LOGGER).info("gamma=1.3 done")
    logging.getLogger("su11sim.jsa").debug("grid built")

    handlers = logging.getLogger().handlers + logging.getLogger(SWEEP_LOGGER).handlers
    for handler in handlers:
        handler.close()
    setup_logging(enable_console=False)

    assert "gamma=1.3 done" in (tmp_path / "sweeps.log").read_text()
    assert "grid built" in (tmp_path / "su11sim.log").read_text()
