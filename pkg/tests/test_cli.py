"""Command-line behavior: exit codes, determinism, file outputs."""

import json

import numpy as np
import pytest
from PIL import Image

from fouriscale import FilterSpec, Tensor, build_mask_2d, read_tensor, write_tensor
from fouriscale.cli import main


def _write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


IDENTITY_DOC = {
    "original": [8, 8], "target": [8, 8], "steps": 1, "anneal": [0, 0],
    "filter": {"sigma": 0.0, "ramp": [0.0, 0.0]}, "sigma_mild": 1.0, "blocks": [],
}


def test_verify_all_passes(capsys):
    assert main(["verify", "all", "--trials", "10", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert "RESULT PASS" in out
    for name in ("lemma", "theorem", "tiling", "consistency"):
        assert name in out


def test_verify_zero_tolerance_fails(capsys):
    assert main(["verify", "lemma", "--trials", "5", "--tolerance", "0"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_unknown_suite_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "bogus"])
    assert excinfo.value.code == 2


def test_verify_json_deterministic(capsys):
    argv = ["verify", "all", "--trials", "8", "--seed", "3", "--json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["pass"] is True
    assert payload["generator"] == "numpy-PCG64"
    assert len(payload["suites"]) == 4


def test_apply_identity_roundtrip(tmp_path, capsys):
    rng = np.random.default_rng(0)
    t = Tensor(rng.standard_normal((8, 8)))
    tensor_path = tmp_path / "in.fstn"
    write_tensor(t, tensor_path)
    kernel_path = tmp_path / "k.fstn"
    write_tensor(Tensor(np.array([[1.0]])), kernel_path)
    out_path = tmp_path / "out.fstn"

    code = main(["apply", "--in", str(tensor_path), "--kernel", str(kernel_path),
                 "--config", _write_config(tmp_path, IDENTITY_DOC),
                 "--step", "0", "--out", str(out_path)])
    assert code == 0
    back = read_tensor(out_path)
    assert np.max(np.abs(back.data - t.data)) <= 1e-12


def test_apply_rectangular_input_keeps_extents(tmp_path):
    rng = np.random.default_rng(1)
    doc = {"original": [64, 64], "target": [128, 64], "steps": 1, "anneal": [1, 1],
           "filter": {"sigma": 0.0, "ramp": [0.0, 0.0]}, "sigma_mild": 1.0, "blocks": []}
    tensor_path = tmp_path / "in.fstn"
    write_tensor(Tensor(rng.standard_normal((128, 64))), tensor_path)
    kernel_path = tmp_path / "k.fstn"
    write_tensor(Tensor(rng.standard_normal((3, 3))), kernel_path)
    out_path = tmp_path / "out.fstn"

    code = main(["apply", "--in", str(tensor_path), "--kernel", str(kernel_path),
                 "--config", _write_config(tmp_path, doc),
                 "--step", "0", "--out", str(out_path)])
    assert code == 0
    assert read_tensor(out_path).dims == (128, 64)


def test_apply_missing_kernel_exits_3(tmp_path):
    tensor_path = tmp_path / "in.fstn"
    write_tensor(Tensor(np.zeros((8, 8))), tensor_path)
    code = main(["apply", "--in", str(tensor_path), "--kernel", str(tmp_path / "nope.fstn"),
                 "--config", _write_config(tmp_path, IDENTITY_DOC),
                 "--step", "0", "--out", str(tmp_path / "out.fstn")])
    assert code == 3


def test_apply_config_mismatch_exits_2(tmp_path):
    rng = np.random.default_rng(2)
    tensor_path = tmp_path / "in.fstn"
    write_tensor(Tensor(rng.standard_normal((16, 16))), tensor_path)
    kernel_path = tmp_path / "k.fstn"
    write_tensor(Tensor(np.array([[1.0]])), kernel_path)
    code = main(["apply", "--in", str(tensor_path), "--kernel", str(kernel_path),
                 "--config", _write_config(tmp_path, IDENTITY_DOC),
                 "--step", "0", "--out", str(tmp_path / "out.fstn")])
    assert code == 2


def test_apply_emit_spectra(tmp_path):
    rng = np.random.default_rng(3)
    doc = {"original": [8, 8], "target": [16, 16], "steps": 1, "anneal": [1, 1],
           "filter": {"sigma": 0.0, "ramp": [0.0, 0.0]}, "sigma_mild": 1.0, "blocks": []}
    tensor_path = tmp_path / "in.fstn"
    write_tensor(Tensor(rng.standard_normal((16, 16))), tensor_path)
    kernel_path = tmp_path / "k.fstn"
    write_tensor(Tensor(np.array([[1.0]])), kernel_path)
    prefix = str(tmp_path / "spec")

    code = main(["apply", "--in", str(tensor_path), "--kernel", str(kernel_path),
                 "--config", _write_config(tmp_path, doc), "--step", "0",
                 "--out", str(tmp_path / "out.fstn"), "--emit-spectra", prefix])
    assert code == 0
    manifest = json.loads((tmp_path / "spec_spectra.json").read_text())
    assert manifest["layout"] == "centralized"
    assert (tmp_path / "spec_pre.png").exists()
    assert (tmp_path / "spec_post.png").exists()


def test_apply_determinism(tmp_path):
    rng = np.random.default_rng(4)
    tensor_path = tmp_path / "in.fstn"
    write_tensor(Tensor(rng.standard_normal((8, 8))), tensor_path)
    kernel_path = tmp_path / "k.fstn"
    write_tensor(Tensor(rng.standard_normal((3, 3))), kernel_path)
    config = _write_config(tmp_path, IDENTITY_DOC)

    outputs = []
    for name in ("a.fstn", "b.fstn"):
        out_path = tmp_path / name
        assert main(["apply", "--in", str(tensor_path), "--kernel", str(kernel_path),
                     "--config", config, "--step", "0", "--out", str(out_path)]) == 0
        outputs.append(out_path.read_bytes())
    assert outputs[0] == outputs[1]


def test_schedule_lines(tmp_path, capsys):
    doc = {"preset": "sd21", "original": [64, 64], "target": [256, 256]}
    assert main(["schedule", "--config", _write_config(tmp_path, doc)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 50
    for t in range(20):
        assert "dilation=4" in lines[t]
    for t in range(35, 50):
        assert "identity" in lines[t]


def test_schedule_single_identity_step(tmp_path, capsys):
    doc = {"original": [8, 8], "target": [8, 8], "steps": 1, "anneal": [0, 0]}
    assert main(["schedule", "--config", _write_config(tmp_path, doc)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1
    assert "identity" in lines[0]


def test_schedule_json_monotone(tmp_path, capsys):
    doc = {"preset": "sd15", "original": [64, 64], "target": [256, 256]}
    assert main(["schedule", "--config", _write_config(tmp_path, doc), "--json"]) == 0
    records = json.loads(capsys.readouterr().out)
    dilations = [r["dilation"] for r in records]
    assert dilations[0] == 4 and dilations[-1] == 1
    assert all(a >= b for a, b in zip(dilations, dilations[1:]))


def test_schedule_invalid_config_exits_2(tmp_path):
    doc = {"original": [8, 8], "target": [8, 8], "steps": 1, "anneal": [1, 0]}
    assert main(["schedule", "--config", _write_config(tmp_path, doc)]) == 2


def test_spectrum_constant_input_dc_pixel(tmp_path):
    tensor_path = tmp_path / "in.fstn"
    write_tensor(Tensor(np.ones((8, 8))), tensor_path)
    out_path = tmp_path / "spec.png"
    assert main(["spectrum", "--in", str(tensor_path), "--out", str(out_path),
                 "--centralize"]) == 0
    pixels = np.asarray(Image.open(out_path))
    assert pixels[4, 4] == 255
    pixels = pixels.astype(int)
    pixels[4, 4] = 0
    assert np.all(pixels == 0)


def test_spectrum_profile_row_count(tmp_path):
    tensor_path = tmp_path / "in.fstn"
    write_tensor(Tensor(np.random.default_rng(5).standard_normal((10, 12))), tensor_path)
    csv_path = tmp_path / "profile.csv"
    assert main(["spectrum", "--in", str(tensor_path), "--out", str(tmp_path / "s.png"),
                 "--centralize", "--profile", str(csv_path)]) == 0
    rows = csv_path.read_text().strip().splitlines()
    assert len(rows) == 10 // 2 + 1
    assert rows[0].startswith("0,")


def test_spectrum_dilated_kernel_shows_tiling(tmp_path):
    from fouriscale import Kernel, dilate_kernel
    grid = dilate_kernel(Kernel(np.random.default_rng(6).standard_normal((5, 5))), 4, 4)
    tensor_path = tmp_path / "grid.fstn"
    write_tensor(Tensor(grid.materialize()), tensor_path)
    out_path = tmp_path / "tiles.png"
    assert main(["spectrum", "--in", str(tensor_path), "--out", str(out_path),
                 "--centralize"]) == 0
    pixels = np.asarray(Image.open(out_path), dtype=float)
    # Period-5 tiling: every 5-shifted view matches the original rendering.
    assert np.array_equal(pixels, np.roll(pixels, (5, 5), axis=(0, 1)))


def test_mask_command_matches_library(tmp_path):
    out_path = tmp_path / "mask.fstn"
    assert main(["mask", "--extent", "32", "24", "--scale", "2.0", "3.0",
                 "--ramp", "2.0", "1.0", "--sigma", "0.4", "--out", str(out_path)]) == 0
    expected = build_mask_2d((32, 24), FilterSpec(2.0, 3.0, 2.0, 1.0, 0.4))
    stored = read_tensor(out_path)
    assert stored.data.tobytes() == expected.values.tobytes()


def test_mask_image_rendering(tmp_path):
    out_path = tmp_path / "mask.fstn"
    image_path = tmp_path / "mask.png"
    assert main(["mask", "--extent", "16", "16", "--scale", "2.0", "2.0",
                 "--out", str(out_path), "--image", str(image_path)]) == 0
    pixels = np.asarray(Image.open(image_path))
    assert pixels[8, 8] == 255 and pixels[0, 0] == 0
