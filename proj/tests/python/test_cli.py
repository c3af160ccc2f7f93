# Copyright 2026 The PLAID-cpp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import os
import shutil
import subprocess

import pytest

CLI = os.environ.get("PLAID_CLI", "plaid")
QUICK = "shape_modes = 4\nfield_modes = 4\ncommon_mesh_rings = 10\ngp_rounds = 4\n"


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    assert run("generate", "--case", "plate2d", "--n", 12, "--seed", 3, "--out", root / "ds").returncode == 0
    (root / "cfg.txt").write_text(QUICK)
    fit = run("mmgp", "fit", "--train", root / "ds", "--config", root / "cfg.txt", "--model", root / "model")
    assert fit.returncode == 0, fit.stderr
    pred = run("mmgp", "predict", "--model", root / "model", "--data", root / "ds", "--out", root / "pred")
    assert pred.returncode == 0, pred.stderr
    return root


def test_validate_and_info(workspace):
    v = run("validate", "--strict", workspace / "ds")
    assert v.returncode == 0
    assert "0 violations" in v.stdout
    info = run("--format", "json", "info", workspace / "ds")
    assert info.returncode == 0
    doc = json.loads(info.stdout)
    assert doc["samples"] == 12


def test_score_text_and_json(workspace):
    text = run("score", "--ref", workspace / "ds", "--pred", workspace / "pred")
    assert text.returncode == 0
    assert "total_error" in text.stdout
    doc = json.loads(run("--format", "json", "score", "--ref", workspace / "ds", "--pred", workspace / "pred").stdout)
    assert 0.0 < doc["total_error"] < 0.2
    assert {o["name"] for o in doc["outputs"]} == {"du_dx", "u", "u_max"}


def test_hidden_scores(workspace):
    out = run("--format", "json", "score", "--ref", workspace / "ds", "--pred", workspace / "pred", "--hidden")
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["public"]["n_samples"] + doc["private"]["n_samples"] == 3


def test_participant_export_drops_partition(workspace):
    out = workspace / "export"
    assert run("convert", "--in", workspace / "ds", "--mode", "participant-export", "--out", out).returncode == 0
    assert not (out / "problem_definition" / "hidden_partition.csv").exists()
    assert (out / "problem_definition" / "split.csv").exists()


def test_missing_directory_is_usage_error(workspace):
    assert run("info", workspace / "absent").returncode == 2
    assert run("validate", workspace / "absent").returncode == 2


def test_unknown_subcommand_is_usage_error():
    assert run("bogus").returncode == 2


def test_non_empty_output_is_rejected(workspace):
    out = run("generate", "--case", "plate2d", "--n", 5, "--seed", 1, "--out", workspace / "ds")
    assert out.returncode == 1
    assert "IoFailure" in out.stderr


def test_mismatched_names_rejected(workspace):
    other = workspace / "renamed"
    shutil.copytree(workspace / "ds", other)
    infos = other / "problem_definition" / "problem_infos.yaml"
    infos.write_text(infos.read_text().replace("[du_dx, u]", "[du_dx, v]"))
    out = run("mmgp", "predict", "--model", workspace / "model", "--data", other, "--out", workspace / "pred2")
    assert out.returncode == 1
    assert "ConfigInvalid" in out.stderr


def test_corrupted_blob_fails(workspace):
    broken = workspace / "broken"
    shutil.copytree(workspace / "ds", broken)
    blob = next((broken / "dataset" / "samples" / "sample_000000001" / "meshes").glob("*.0.blob"))
    blob.write_bytes(blob.read_bytes()[:10])
    out = run("validate", broken)
    assert out.returncode == 1
    assert "FormatError" in out.stderr
