# Copyright 2026 The freshkit Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math
import os
import pathlib
import subprocess

import numpy as np
import pytest

import freshkit

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMA = pathlib.Path(os.environ.get("FRESHKIT_SCHEMA", ROOT / "docs" / "report_schema.json"))


@pytest.fixture(scope="module")
def schema():
    return json.loads(SCHEMA.read_text())


@pytest.fixture(scope="module")
def demo_report():
    return freshkit.demo(42)


def test_scores():
    assert freshkit.msp_score([0, 0, 0, 0]) == pytest.approx(0.25)
    e = math.e
    assert freshkit.msp_score([2, 1, 0, 0]) == pytest.approx(e * e / (e * e + e + 2), abs=1e-14)
    assert freshkit.energy_score([0, 0, 0, 0]) == pytest.approx(-math.log(4))
    assert sum(freshkit.softmax([1.0, 2.0, 3.0], 2.0)) == pytest.approx(1.0)


def test_errors_carry_code():
    with pytest.raises(freshkit.FreshkitError, match="NonPositiveTemperature"):
        freshkit.softmax([1.0], 0.0)
    with pytest.raises(ValueError):
        freshkit.ood_metrics([0.5], [])


def test_ood_metrics_and_sweep():
    assert freshkit.auroc([0.9, 0.8, 0.4], [0.7, 0.3, 0.2]) == pytest.approx(8 / 9)
    m = freshkit.ood_metrics([0.9, 0.8], [0.3, 0.2])
    assert m["auroc"] == 1.0 and m["fpr_at_95tpr"] == 0.0
    points = freshkit.threshold_sweep([0.3, 0.6, 0.9])
    assert [p["tau"] for p in points] == freshkit.DEFAULT_TAUS
    half = next(p for p in points if p["tau"] == 0.5)
    assert half["coverage"] == pytest.approx(2 / 3)


def test_mcnemar_row():
    r = freshkit.mcnemar(788, 35, 8, 12)
    assert r["chi2"] == pytest.approx(16.331, abs=1e-3)
    assert r["p"] == pytest.approx(5.32e-5, rel=0.02)
    assert r["ci"][0] == pytest.approx(0.0169, abs=1e-4)
    assert freshkit.paired_outcomes([True, True, False], [True, False, False]) == (1, 1, 0, 1)
    assert freshkit.chi2_sf_df1(3.841459) == pytest.approx(0.05, abs=1e-4)


def test_classification_metrics():
    assert freshkit.confusion([0, 1, 1], [0, 0, 1], 2) == [[1, 0], [1, 1]]
    assert freshkit.prf([0, 1, 1], [0, 0, 1], 2)["macro_f1"] == pytest.approx(2 / 3)
    ce = freshkit.cross_entropy([[0.8, 0.2], [0.3, 0.7]], [0, 1])
    assert ce == pytest.approx(-(math.log(0.8) + math.log(0.7)) / 2)


def test_masks_and_images():
    pred = np.zeros((4, 4), dtype=bool)
    pred[0:2, 0:2] = True
    gt = np.zeros((4, 4), dtype=bool)
    gt[1, 1:3] = True
    m = freshkit.mask_metrics(pred, gt)
    assert m["iou"] == pytest.approx(0.2)
    assert m["pixel_acc"] == pytest.approx(0.75)

    img = np.zeros((64, 64, 3), dtype=np.uint8)
    img[:] = (40, 160, 60)
    yy, xx = np.mgrid[0:64, 0:64]
    ellipse = ((xx - 31.5) / 19) ** 2 + ((yy - 31.5) / 14) ** 2 <= 1
    img[ellipse] = (200, 40, 40)
    r = freshkit.grabcut(img, seed=42)
    assert r["mask"].shape == (64, 64)
    inter = np.logical_and(r["mask"], ellipse).sum()
    union = np.logical_or(r["mask"], ellipse).sum()
    assert inter / union >= 0.95
    masked = freshkit.apply_mask(img, r["mask"])
    assert (masked[~r["mask"]] == 0).all()

    assert freshkit.phash64(np.full((20, 30, 3), 77, dtype=np.uint8)) == 0
    shifted = np.clip(img.astype(int) + 10, 0, 255).astype(np.uint8)
    assert freshkit.hamming(freshkit.phash64(img), freshkit.phash64(shifted)) == 0


def test_split_and_weights():
    parts, counts = freshkit.stratified_split([0] * 100 + [1] * 100, 2)
    assert counts == [[70, 15, 15], [70, 15, 15]]
    assert len(parts) == 200
    assert freshkit.class_weights([0, 1, 1, 1], 2) == pytest.approx([2.0, 2 / 3])


def test_demo_report_validates(demo_report, schema):
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(demo_report, schema)
    assert demo_report["classification"]["accuracy"] >= 0.95
    for method in ("msp", "energy", "odin"):
        assert demo_report["ood"][method]["auroc"] >= 0.90


def test_cli_reports_validate(schema, tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    code, out, _ = freshkit.run_cli(["mcnemar", "--n11", "788", "--n10", "35",
                                     "--n01", "8", "--n00", "12"])
    assert code == 0
    jsonschema.validate(json.loads(out), schema)
    scores = tmp_path / "s.csv"
    scores.write_text("id,score,is_id\na,0.9,1\nb,0.2,0\nc,0.7,1\n")
    for args in (["ood-eval", "--scores", str(scores)], ["sweep", "--scores", str(scores)],
                 ["bootstrap", "--scores", str(scores), "--replicates", "100"]):
        code, out, err = freshkit.run_cli(args)
        assert code == 0, err
        jsonschema.validate(json.loads(out), schema)
    code, _, err = freshkit.run_cli(["score", "--logits", str(tmp_path / "missing.csv")])
    assert code == 2


def test_cli_repeat_runs_identical():
    first = freshkit.run_cli(["demo", "--seed", "7"])
    second = freshkit.run_cli(["demo", "--seed", "7"])
    assert first[0] == 0
    assert first[1] == second[1]


@pytest.mark.skipif("FRESHKIT_CLI" not in os.environ, reason="command-line binary not given")
def test_cli_binary_exit_codes(tmp_path):
    cli = os.environ["FRESHKIT_CLI"]
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    r = subprocess.run([cli, "score", "--method", "energy", "--logits", str(empty)],
                       capture_output=True, text=True)
    assert r.returncode == 2
    assert "EmptyInput" in r.stderr
    assert subprocess.run([cli, "nonsense"], capture_output=True).returncode == 1
    assert subprocess.run([cli, "--help"], capture_output=True).returncode == 0
