import json

import pytest

from gaussian_dfa.config import Config, Tolerances, load_config
from gaussian_dfa.errors import ModelParseError


@pytest.mark.utils
def test_environment_defaults(monkeypatch):
    with monkeypatch.context() as m:
        m.setenv("GAUSS_DFA_SPAN_TOL", "1e-7")
        m.setenv("GAUSS_DFA_SEED", "3")
        config = Config()
        assert config.tolerances.span == 1e-7
        assert config.seed == 3


@pytest.mark.utils
def test_precedence(tmp_path):
    '''
    The file overrides the environment and explicit overrides win over both
    '''
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps({
            "output_format": "json",
            "tolerances": {
                "span": 1e-6,
                "quad": 1e-8
            },
        }))
    config = load_config(path, overrides={"tolerances": {"span": 1e-5}})
    assert config.output_format == "json"
    assert config.tolerances.span == 1e-5
    assert config.tolerances.quad == 1e-8

    # None means "not given on the command line"
    same = load_config(path, overrides={"output_format": None, "seed": None})
    assert same.output_format == "json"


@pytest.mark.utils
def test_invalid_configs(tmp_path):
    with pytest.raises(ValueError, match="unknown config keys"):
        Config().updated({"bogus": 1})
    with pytest.raises(ValueError, match="unknown tolerances"):
        Config().updated({"tolerances": {"bogus": 1.0}})
    with pytest.raises(ValueError, match="must be > 0"):
        Config(tolerances=Tolerances(span=0.0))
    with pytest.raises(ValueError, match="output format"):
        Config(output_format="xml")
    with pytest.raises(ValueError, match="ode_method"):
        Config(ode_method="euler")
    with pytest.raises(ValueError, match="quad_limit"):
        Config(quad_limit=0)

    path = tmp_path / "config.json"
    path.write_text("[1, 2]")
    with pytest.raises(ModelParseError):
        load_config(path)
    path.write_text("{")
    with pytest.raises(ModelParseError):
        load_config(path)
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "missing.json")


@pytest.mark.utils
def test_round_trip():
    config = Config().updated({"seed": 11, "tolerances": {"rank": 1e-10}})
    data = config.to_dict()
    assert data["seed"] == 11
    assert data["tolerances"]["rank"] == 1e-10
    assert Config().updated(data) == config
