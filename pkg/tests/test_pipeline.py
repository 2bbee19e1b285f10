"""End-to-end pipeline on the small config."""

from types import SimpleNamespace

from dyadic_averaging.output.results import read_csv
from dyadic_averaging.output.summary import read_summary
from dyadic_averaging.pipeline import run_pipeline


def test_writes_every_output(small_config, tmp_path):
    passed = run_pipeline(small_config, tmp_path, experiments=["en", "pn"])

    for name in ("en", "pn"):
        report = read_csv(tmp_path / f"{name}.csv")
        assert report.rows and {row.experiment for row in report.rows} == {name}

    summary = read_summary(tmp_path / "summary.json")
    assert summary.passed is passed
    assert summary.seed == small_config.seed
    assert summary.experiments == ["en", "pn"]
    assert [sweep.experiment for sweep in summary.sweeps] == ["en", "pn"]
    assert {check.name for check in summary.checks} >= {"flat[en]", "flat[pn]"}
    assert not summary.failures

    text = (tmp_path / "report.md").read_text()
    assert text.startswith(f"# dyadic-averaging run (seed {small_config.seed})")
    assert "| flat[en] |" in text


def test_failed_sweep_is_recorded(small_config, tmp_path, mocker):
    mocker.patch("dyadic_averaging.experiments.sweeps.run_sweep", side_effect=RuntimeError("boom"))

    assert run_pipeline(small_config, tmp_path, experiments=["en"]) is False
    summary = read_summary(tmp_path / "summary.json")
    assert summary.failures == ["sweep en: boom"]
    assert not (tmp_path / "en.csv").exists()
    assert "Steps with errors: sweep en: boom" in (tmp_path / "report.md").read_text()


def test_filter_failure_stops_early(small_config, tmp_path, mocker):
    mocker.patch(
        "dyadic_averaging.wavelets.filters.verify_filter_identities",
        return_value=SimpleNamespace(passed=False),
    )
    sweep = mocker.patch("dyadic_averaging.experiments.sweeps.run_sweep")

    assert run_pipeline(small_config, tmp_path / "out", experiments=["en"]) is False
    sweep.assert_not_called()
    assert not (tmp_path / "out" / "summary.json").exists()
