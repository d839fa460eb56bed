import math
import os
import subprocess

import numpy as np
import pytest

import hanjoint


def test_hangul_round_trip():
    assert hanjoint.decompose_syllable("한") == ["ㅎ", "ㅏ", "ㄴ"]
    assert hanjoint.decompose_text("한 A") == ["ㅎ", "ㅏ", "ㄴ", " ", "A"]
    assert hanjoint.compose_jamo(["ㄱ", "ㅏ", "ㄴ", "ㅏ"]) == "가나"
    assert len(hanjoint.jamo_inventory()) == 51
    with pytest.raises(hanjoint.HanjointError) as err:
        hanjoint.compose_jamo(["ㅏ"])
    assert err.value.code == "NonComposable"


def test_ctc_matches_brute_force_and_known_value():
    uniform = np.log(np.full((2, 2), 0.5))
    log_prob, feasible = hanjoint.ctc_log_prob(uniform, [1])
    assert feasible
    assert log_prob == pytest.approx(math.log(0.75), abs=1e-12)
    assert hanjoint.ctc_log_prob(uniform[:1], [1, 1]) == (-math.inf, False)

    lat = hanjoint.random_lattice(5, 4, 3)
    for label in ([], [1], [2, 3], [1, 1]):
        assert hanjoint.ctc_log_prob(lat, label)[0] == pytest.approx(
            hanjoint.brute_force_ctc(lat, label), abs=1e-9)


def test_gradient_is_finite_difference():
    rng = np.random.default_rng(0)
    logits = rng.normal(size=(4, 3))
    lp, grad = hanjoint.ctc_loss_and_grad(logits, [1, 2])
    eps = 1e-5
    bumped = logits.copy()
    bumped[2, 1] += eps
    fd = (hanjoint.ctc_loss_and_grad(bumped, [1, 2])[0] - lp) / eps
    assert grad[2, 1] == pytest.approx(fd, rel=1e-3)
    assert np.allclose(grad.sum(axis=1), 0.0)


def test_decoders_recover_noise_free_text():
    text = "흙 가나"
    syl = hanjoint.Vocabulary.build(["가", "나"])
    gra = hanjoint.Vocabulary.build(["ㅎ", "ㅡ", "ㄺ", "ㄱ", "ㅏ", "ㄴ"])
    syl_lat = hanjoint.gen_lattice(text, syl, "syllable", uniform_oov=True)
    gra_lat = hanjoint.gen_lattice(text, gra, "grapheme")
    assert hanjoint.greedy_decode(gra_lat, gra, "grapheme") == text
    hyps = hanjoint.prefix_beam_search(gra_lat, gra, level="grapheme")
    assert hanjoint.tokens_to_text(hyps[0][0], gra, "grapheme") == text
    candidates, dropped = hanjoint.joint_decode(syl_lat, gra_lat, syl, gra)
    assert candidates[0]["text"] == text
    assert candidates[0]["syllable_log_prob"] is None
    assert candidates[0]["provenance"] == ["grapheme_beam"]
    assert dropped >= 0


def test_metrics():
    assert hanjoint.cer("가나다라마", "가나타라마") == pytest.approx(0.2)
    assert hanjoint.wer("안녕 하세요", "안녕하 세요") == pytest.approx(1.0)
    assert hanjoint.swer("안녕 하세요", "안녕하 세요") == 0.0
    assert hanjoint.space_normalize("가나 다", "가타다") == "가타 다"
    assert hanjoint.edit_distance(list("kitten"), list("sitting")) == 3


def test_lattice_file_round_trip(tmp_path):
    lat = hanjoint.random_lattice(3, 5, 1)
    path = str(tmp_path / "x.txt")
    hanjoint.save_lattice(lat, path, True, "text")
    loaded, normalized = hanjoint.load_lattice(path)
    assert normalized
    assert np.array_equal(loaded, lat)
    with pytest.raises(hanjoint.HanjointError):
        hanjoint.load_lattice(str(tmp_path / "missing.ctcl"))


def test_cli_through_module_and_executable(tmp_path):
    code, out, _ = hanjoint.run_cli(["selfcheck"])
    assert code == 0 and "FAIL" not in out
    code, _, log = hanjoint.run_cli(["synth", "--out", str(tmp_path / "c"), "--random", "5"])
    assert code == 0, log
    exe = os.environ.get("HANJOINT_CLI")
    if exe:
        proc = subprocess.run([exe, "decode", "--corpus", str(tmp_path / "c/corpus.jsonl"),
                               "--mode", "greedy", "--syllable-vocab",
                               str(tmp_path / "c/syllable.vocab")],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.count("\n") == 5
