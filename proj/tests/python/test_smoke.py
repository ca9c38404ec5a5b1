import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import oiso

DATA = Path(os.environ.get("OISO_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def test_decompose_weighted_swap():
    d = oiso.decompose(np.array([[0.0, 2.0], [3.0, 0.0]]), mode="exact")
    assert d["sigma"] == [1, 0]
    assert d["weight"] == [2.0, 3.0]
    assert d["mode"] == "exact"


def test_shear_is_rejected_with_witness():
    shear = np.array([[1.0, 1.0], [0.0, 1.0]])
    cert = oiso.is_order_isomorphism(shear)
    assert not cert["accept"]
    assert cert["witness"]["direction"] == "inverse"
    assert oiso.is_order_isomorphism(shear, lp=True)["accept"] is False
    with pytest.raises(oiso.Rejection):
        oiso.decompose(shear)


def test_classify_kinds():
    assert oiso.classify(np.eye(3)[[2, 0, 1]])["kind"] == "algebra-iso"
    assert oiso.classify(np.array([[0.0, -1.0], [1.0, 0.0]]))["kind"] == "isometry"
    assert oiso.classify(np.array([[0.0, 2.0], [3.0, 0.0]]))["kind"] == "lattice-iso"


def test_lipschitz_family_is_adequate():
    metric = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
    gens = oiso.lipschitz_family(metric)
    assert gens.shape == (3, 3)
    report = oiso.check_adequate(gens, metric)
    assert report["adequate"] is True
    assert oiso.check_adequate(gens[1:], metric)["has_constants"] is False


def test_compactification_maps():
    assert oiso.compactify(math.inf) == 1.0
    assert oiso.decompactify(oiso.compactify(3.5)) == pytest.approx(3.5)


def test_example_space():
    assert oiso.eval_expr("(clamp t)", 0.5) == pytest.approx(math.sqrt(0.5))
    lf = oiso.local_form("(clamp (lin (2) (t)))")
    assert lf["u"] == "(theta (lin (2) (t)))"
    assert lf["j"] == (0.125, 0.25)
    assert oiso.decay_check("(lin (5 1) ((const 1) (theta t)))")["passed"]
    with pytest.raises(oiso.Rejection):
        oiso.local_form("(clamp (lin (2) (t)))", depth_cap=0)
    with pytest.raises(oiso.InvalidArgument):
        oiso.eval_expr("(theta (clamp t))", 0.5)


def test_cli_round_trip_is_deterministic():
    args = ["--seed", "3", "fuzz", "--dim", "2", "--max-dim", "8", "--count", "5"]
    code, out, _ = oiso.run(args)
    assert code == 0
    assert oiso.run(args)[1] == out
    report = json.loads(out)
    assert report["results"]["match_rate"] == 1.0


def test_cli_exit_codes():
    assert oiso.run(["decompose", str(DATA / "swap_weighted.json")])[0] == 0
    assert oiso.run(["decompose", str(DATA / "shear.json")])[0] == 2
    assert oiso.run(["decompose", "--no-such-flag"])[0] == 1
