import json

import numpy as np
import pytest
from dfa_util import MODELS_DIR, get_fixture_list

from gaussian_dfa.errors import ModelParseError, SelfAdjointnessViolated
from gaussian_dfa.model import (decode_complex, dump_model, encode_complex,
                                load_model, model_from_dict,
                                number_hamiltonian_model,
                                position_coupled_pair, rank_one,
                                sharp_commutator_chain, single_kraus,
                                two_boson_bath, validate)


def _assert_same_model(a, b):
    for attr in ("omega", "kappa", "zeta", "V", "U"):
        np.testing.assert_allclose(getattr(a, attr),
                                   getattr(b, attr),
                                   atol=1e-14,
                                   err_msg=attr)


@pytest.mark.model
@pytest.mark.parametrize("name", get_fixture_list())
def test_fixtures_load_and_validate(name):
    model = load_model(MODELS_DIR / f"{name}.json")
    assert model.name == name
    assert validate(model).passed


@pytest.mark.model
def test_dump_and_reload(fixture_model):
    model = fixture_model("position_coupled_pair")
    reloaded = model_from_dict(json.loads(dump_model(model)))
    _assert_same_model(model, reloaded)
    assert reloaded.name == model.name


@pytest.mark.model
def test_name_defaults_to_file_stem(tmp_path):
    path = tmp_path / "my_model.json"
    path.write_text(json.dumps({"d": 1, "kraus": [{"kind": "a", "mode": 1}]}))
    assert load_model(path).name == "my_model"


@pytest.mark.model
def test_encode_complex():
    assert encode_complex(np.array([1 + 2j, 3])) == [[1.0, 2.0], [3.0, 0.0]]
    decoded = decode_complex([[1, 2], 3], (2, ), "x")
    np.testing.assert_array_equal(decoded, [1 + 2j, 3])


@pytest.mark.model
@pytest.mark.parametrize("data, match", [
    ([], "JSON object"),
    ({}, "positive integer"),
    ({"d": 0, "kraus": [{"kind": "a", "mode": 1}]}, "positive integer"),
    ({"d": 1}, "'kraus'"),
    ({"d": 1, "kraus": []}, "non-empty"),
    ({"d": 1, "kraus": [{"kind": "a"}]}, "invalid kraus entry"),
    ({"d": 1, "kraus": [{"kind": "z", "mode": 1}]}, "invalid kraus entry"),
    ({"d": 1, "m": 2, "kraus": [{"kind": "a", "mode": 1}]}, "does not match"),
    ({"d": 1, "m": [1], "V": [[1]], "U": [[0]]}, "positive integer 'm'"),
    ({"d": 1, "m": 0, "V": [], "U": []}, "positive integer 'm'"),
    ({"d": 1, "m": "two", "kraus": [{"kind": "a", "mode": 1}]},
     "positive integer 'm'"),
    ({"d": 1, "m": 1, "V": [["x"]], "U": [[0]]}, "V"),
    ({"d": 2, "m": 1, "V": [[1]], "U": [[0, 0]]}, "length 2"),
    ({"d": 1, "kraus": [{"kind": "a", "mode": 1}],
      "terms": [{"coeff": 1.0}]}, "invalid term"),
])
def test_parse_errors(data, match):
    with pytest.raises(ModelParseError, match=match):
        model_from_dict(data)


@pytest.mark.model
def test_unsymmetrized_terms_in_file():
    with pytest.raises(SelfAdjointnessViolated):
        model_from_dict({
            "d": 1,
            "kraus": [{"kind": "a", "mode": 1}],
            "terms": [{"coeff": 1.0, "factors": ["q1", "p1"]}],
        })


@pytest.mark.model
def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ModelParseError, match="invalid JSON"):
        load_model(path)


@pytest.mark.model
def test_model_file_not_utf8(tmp_path):
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"name": "caf\xe9", "d": 1}')
    with pytest.raises(ModelParseError, match="not UTF-8"):
        load_model(path)


@pytest.mark.model
def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_model(tmp_path / "absent.json")


@pytest.mark.model
@pytest.mark.parametrize("case, fixture", [
    ("q", "single_kraus_q_d3"),
    ("q+iq", "single_kraus_q_iq_d3"),
    ("a", "single_kraus_a_d3"),
    ("adag", "single_kraus_adag_d3"),
])
def test_single_kraus_builder_matches_fixture(case, fixture, fixture_model):
    _assert_same_model(single_kraus(case), fixture_model(fixture))


@pytest.mark.model
def test_builders_match_fixtures(fixture_model):
    _assert_same_model(sharp_commutator_chain(2),
                       fixture_model("sharp_chain_d2"))
    _assert_same_model(sharp_commutator_chain(3),
                       fixture_model("sharp_chain_d3"))
    _assert_same_model(position_coupled_pair(),
                       fixture_model("position_coupled_pair"))
    _assert_same_model(number_hamiltonian_model([1, 0, 0], [0, 1, 0]),
                       fixture_model("number_hamiltonian_d3"))


@pytest.mark.model
def test_two_boson_bath_builder():
    psi = [1, 1]
    model = two_boson_bath(rank_one(psi), rank_one(psi))
    assert model.m == 2
    # one annihilation-type and one creation-type operator along psi
    np.testing.assert_allclose(np.abs(model.V[0]), np.sqrt([0.5, 0.5]))
    np.testing.assert_allclose(model.U[0], [0, 0])
    np.testing.assert_allclose(np.abs(model.U[1]), np.sqrt([0.5, 0.5]))

    full = two_boson_bath(np.eye(2), rank_one(psi))
    assert full.m == 3

    with pytest.raises(ValueError):
        two_boson_bath(np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        two_boson_bath(-np.eye(2), np.eye(2))
