from __future__ import annotations

import pytest

from ideation.config import load_study_config
from ideation.errors import DataError
from ideation.experiment import (
    Direction,
    compare_fields,
    export_report,
    rank_sum_test,
    rank_sum_u,
    read_run_manifest,
    replay_run,
    run_case_study,
    write_run_manifest,
)
from ideation.ideas import read_ideas_jsonl

from conftest import (
    synthetic_titles,
    write_corpus,
    write_study_config,
    write_term_vectors_file,
)


def _brute_force_u(x, y):
    u = 0.0
    for a in x:
        for b in y:
            if a > b:
                u += 1.0
            elif a == b:
                u += 0.5
    return u


def test_rank_sum_u_matches_pairwise_count_on_4x4_fixture():
    near = [0.4, 0.5, 0.6, 0.7]
    far = [0.1, 0.2, 0.3, 0.65]
    assert rank_sum_u(near, far) == _brute_force_u(near, far) == 13.0


def test_rank_sum_u_matches_brute_force_with_ties():
    import random

    rng = random.Random(3)
    for _ in range(50):
        x = [rng.choice([0.1, 0.2, 0.3, 0.4, 0.5]) for _ in range(rng.randint(3, 10))]
        y = [rng.choice([0.1, 0.2, 0.3, 0.4, 0.5]) for _ in range(rng.randint(3, 10))]
        assert rank_sum_u(x, y) == pytest.approx(_brute_force_u(x, y), abs=1e-9)


def test_rank_sum_identical_samples_give_p_one():
    _, p = rank_sum_test([0.5, 0.6, 0.7], [0.5, 0.6, 0.7])
    assert p == pytest.approx(1.0, abs=1e-9)


def test_compare_fields_fully_separated_reports_far_lower():
    comparison = compare_fields([0.5, 0.6, 0.7], [0.1, 0.2, 0.3])
    assert comparison.direction is Direction.FAR_LOWER
    assert comparison.p_value < 0.05
    assert comparison.median_far < comparison.median_near


def test_compare_fields_identical_is_indistinct():
    comparison = compare_fields([0.5, 0.6, 0.7], [0.5, 0.6, 0.7])
    assert comparison.direction is Direction.INDISTINCT
    assert comparison.p_value == pytest.approx(1.0, abs=1e-6)


def test_compare_fields_antisymmetric():
    near = [0.4, 0.5, 0.6, 0.7]
    far = [0.1, 0.2, 0.3, 0.65]
    forward = compare_fields(near, far)
    backward = compare_fields(far, near)
    assert forward.rank_sum_statistic + backward.rank_sum_statistic == pytest.approx(16.0)
    assert forward.p_value == pytest.approx(backward.p_value, abs=1e-12)
    assert forward.direction is backward.direction is Direction.INDISTINCT

    separated_forward = compare_fields([0.5, 0.6, 0.7], [0.1, 0.2, 0.3])
    separated_backward = compare_fields([0.1, 0.2, 0.3], [0.5, 0.6, 0.7])
    assert separated_forward.direction is Direction.FAR_LOWER
    assert separated_backward.direction is Direction.NEAR_LOWER


def test_compare_fields_insufficient_sample():
    with pytest.raises(DataError, match="insufficient sample"):
        compare_fields([0.1, 0.2], [0.3, 0.4, 0.5])


@pytest.fixture
def toy_study(tmp_path):
    corpora = {
        "weapons": write_corpus(
            tmp_path / "weapons.tsv", "weapons", synthetic_titles(40, seed=1)
        ),
        "lighting": write_corpus(
            tmp_path / "lighting.tsv", "lighting", synthetic_titles(40, seed=2)
        ),
    }
    terms = write_term_vectors_file(tmp_path / "terms.tsv", seed=4)
    prox = tmp_path / "prox.tsv"
    prox.write_text(
        "#proximity v1\n"
        "rolling_toys\tweapons\t0.9\n"
        "lighting\trolling_toys\t0.4\n",
        encoding="utf-8",
    )
    config_path = write_study_config(
        tmp_path,
        corpora,
        terms,
        proximity_table=prox,
        target_domain="rolling_toys",
        steps=100,
        n_samples=12,
    )
    return tmp_path, config_path


def test_run_case_study_end_to_end(toy_study):
    tmp_path, config_path = toy_study
    config = load_study_config(config_path)
    result = run_case_study(config)
    assert result.failures == ()
    assert len(result.manifests) == 2
    assert len(result.table) == 2

    by_domain = {m.domain_id: m for m in result.manifests}
    assert by_domain["weapons"].rank == 1
    assert by_domain["lighting"].rank == 2
    for manifest in result.manifests:
        assert manifest.stats.n_generated == 12
        run_dir = config.runs_dir / manifest.run_id
        assert (run_dir / "ideas.jsonl").exists()
        assert (run_dir / "novelty.csv").exists()
        assert (run_dir / "loss.csv").exists()
        assert (run_dir / "manifest.txt").exists()
        ideas = read_ideas_jsonl(config.runs_dir / manifest.ideas_path)
        assert len(ideas) == 12
        assert all(i.target_keyword == "rolling toy" for i in ideas)


def test_run_manifest_roundtrip(toy_study):
    tmp_path, config_path = toy_study
    config = load_study_config(config_path)
    result = run_case_study(config)
    manifest = result.manifests[0]
    path = config.runs_dir / manifest.run_id / "manifest.txt"
    assert read_run_manifest(path) == manifest


def test_manifest_validates_artifact_existence(toy_study, tmp_path):
    _, config_path = toy_study
    config = load_study_config(config_path)
    result = run_case_study(config)
    manifest = result.manifests[0]
    broken = manifest.__class__(**{**manifest.__dict__, "ideas_path": "nope/ideas.jsonl"})
    with pytest.raises(DataError, match="missing artifact"):
        write_run_manifest(tmp_path / "m.txt", broken, config.runs_dir)


def test_replay_reproduces_ideas_bytes(toy_study, tmp_path):
    _, config_path = toy_study
    config = load_study_config(config_path)
    result = run_case_study(config)
    manifest = result.manifests[0]

    replay_dir = tmp_path / "replay-runs"
    replayed = replay_run(manifest, replay_dir)
    original_bytes = (config.runs_dir / manifest.ideas_path).read_bytes()
    replayed_bytes = (replay_dir / replayed.ideas_path).read_bytes()
    assert replayed_bytes == original_bytes
    assert (replay_dir / replayed.novelty_path).read_bytes() == (
        config.runs_dir / manifest.novelty_path
    ).read_bytes()
    assert (replay_dir / replayed.loss_path).read_bytes() == (
        config.runs_dir / manifest.loss_path
    ).read_bytes()


def test_study_isolates_per_domain_failures(tmp_path):
    good = write_corpus(tmp_path / "good.tsv", "good", synthetic_titles(30, seed=3))
    bad = tmp_path / "bad.tsv"
    bad.write_text("corrupt line without tabs\n", encoding="utf-8")
    terms = write_term_vectors_file(tmp_path / "terms.tsv", seed=4)
    config_path = write_study_config(
        tmp_path, {"good": good, "bad": bad}, terms, steps=60, n_samples=5
    )
    result = run_case_study(load_study_config(config_path))
    assert [m.domain_id for m in result.manifests] == ["good"]
    assert len(result.failures) == 1
    assert result.failures[0][0] == "bad"


def test_export_report_writes_table_and_artifacts(toy_study):
    tmp_path, config_path = toy_study
    config = load_study_config(config_path)
    result = run_case_study(config)
    out = tmp_path / "report"
    written = export_report(result.manifests, [], out, config.runs_dir)

    table = (out / "table.csv").read_text(encoding="utf-8").splitlines()
    assert len(table) == 3  # header + 2 domains
    assert table[0].startswith("domain_id,display_name,rank,proximity")
    for line in table[1:]:
        assert "%" in line
    assert (out / "table.txt").exists()
    assert (out / "weapons_loss.csv").exists()
    assert (out / "weapons_novelty.csv").exists()
    assert any(p.name.endswith("min_score_hist.csv") for p in written)
    assert any(p.name.endswith("token_count_hist.csv") for p in written)


def test_export_report_pct_format_matches_table_style(toy_study):
    tmp_path, config_path = toy_study
    config = load_study_config(config_path)
    result = run_case_study(config)
    out = tmp_path / "report2"
    export_report(result.manifests, [], out, config.runs_dir)
    line = (out / "table.csv").read_text(encoding="utf-8").splitlines()[1]
    percent_cell = line.split(",")[6]
    assert percent_cell == f"{result.manifests[0].stats.pct_unique:.1f}%"


def test_study_near_far_comparison(tmp_path):
    corpora = {
        "near_a": write_corpus(tmp_path / "a.tsv", "near_a", synthetic_titles(30, seed=5)),
        "far_b": write_corpus(tmp_path / "b.tsv", "far_b", synthetic_titles(30, seed=6)),
    }
    terms = write_term_vectors_file(tmp_path / "terms.tsv", seed=4)
    config_path = write_study_config(
        tmp_path,
        corpora,
        terms,
        steps=60,
        n_samples=15,
        extra_study_lines="near_domains = near_a\nfar_domains = far_b",
    )
    result = run_case_study(load_study_config(config_path))
    if result.comparison is not None:
        assert result.comparison.direction in set(Direction)
        assert 0.0 <= result.comparison.p_value <= 1.0
