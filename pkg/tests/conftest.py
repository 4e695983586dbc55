import json
import math

import pytest

from su11sim.config.run_config import validate_run_config
from su11sim.dispersion.model import constant_index_model, wavelength_to_omega
from su11sim.sweep_engine.worker import compute_point

# dispersionless birefringent crystal covering a 766 nm pump and its
# degenerate pair with room for wide grids
TOY_WINDOW = (1.0e15, 2.6e15)
TOY_N_O = 1.8
TOY_N_E = 1.9


@pytest.fixture
def tol():
    return 1e-10


@pytest.fixture(autouse=True)
def fresh_point_cache():
    compute_point.cache_clear()
    yield
    compute_point.cache_clear()


@pytest.fixture
def toy_model():
    return constant_index_model(TOY_N_O, TOY_N_E, TOY_WINDOW)


@pytest.fixture
def pump_omega():
    return wavelength_to_omega(766e-9)


@pytest.fixture
def input_dir(tmp_path):
    """Input files live apart from tmp_path so output directories stay clean."""
    path = tmp_path / "inputs"
    path.mkdir()
    return path


@pytest.fixture
def toy_dispersion_file(input_dir):
    entries = [
        {"pol": "o", "type": "table", "points": [[TOY_WINDOW[0], TOY_N_O], [TOY_WINDOW[1], TOY_N_O]]},
        {"pol": "e", "type": "table", "points": [[TOY_WINDOW[0], TOY_N_E], [TOY_WINDOW[1], TOY_N_E]]},
    ]
    path = input_dir / "toy_dispersion.json"
    path.write_text(json.dumps(entries))
    return str(path)


@pytest.fixture
def toy_config_data(toy_dispersion_file):
    """Compensated CW device on the toy crystal; small sweep, gate off."""
    return {
        "dispersion": {"file": toy_dispersion_file},
        "device": {"variant": "compensated", "length_m": 8e-3, "gap_m": 1e-3},
        "pump": {"wavelength_m": 766e-9, "regime": "cw"},
        "grid": {"half_width_rad_s": 4.5e12, "points": 129},
        "phi": {"start": 0.0, "stop": 2 * math.pi, "count": 401},
        "gammas": [0.04],
        "convergence": {"mode": "off"},
    }


@pytest.fixture
def toy_config(toy_config_data):
    return validate_run_config(toy_config_data)


@pytest.fixture
def make_config(toy_config_data):
    """Toy config with nested section updates, e.g. ``make_config(pump={"regime": "pulsed"})``."""

    def factory(**sections):
        data = json.loads(json.dumps(toy_config_data))
        for key, value in sections.items():
            if isinstance(value, dict) and isinstance(data.get(key), dict):
                data[key].update(value)
            else:
                data[key] = value
        return validate_run_config(data)

    return factory


@pytest.fixture
def toy_config_file(input_dir, toy_config_data):
    path = input_dir / "toy_run.json"
    path.write_text(json.dumps(toy_config_data))
    return str(path)
