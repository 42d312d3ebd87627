import datetime as dt
import io
import json
import zipfile
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from rvengine.cli import main


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Simulated raw corpus pushed through ingest -> clean -> measures -> covariances."""
    root = tmp_path_factory.mktemp("ws")
    cfg = root / "engine.toml"
    cfg.write_text(
        "\n".join([
            "[paths]",
            'raw_root = "raw"',
            'store_root = "store"',
            'measures_root = "measures"',
        ])
    )
    runner = CliRunner()

    def run(*args):
        result = runner.invoke(main, ["--config", str(cfg), *args], catch_exceptions=False)
        assert result.exit_code == 0, result.output
        return result

    run("simulate", "--symbol", "SYN1", "--symbol", "SYN2",
        "--from", "2024-01-01", "--to", "2024-02-29", "--ticks", "900", "--seed", "3")
    (root / "raw" / "stocks" / "SYN1" / "adjustments.txt").write_text("2024-02-01 split 2:1\n")
    run("ingest")
    run("clean", "--symbol", "SYN1", "--symbol", "SYN2",
        "--report", str(root / "clean_report.csv"))
    run("measures", "--workers", "2")
    run("covariances")
    return root, cfg, run


def test_pipeline_produces_measure_rows(workspace):
    root, cfg, run = workspace
    import pandas as pd

    df = pd.read_parquet(root / "measures" / "measures" / "stocks.parquet")
    assert set(df["symbol"]) == {"SYN1", "SYN2"}
    # Jan-Feb 2024 excluding weekends and the bundled NYE/MLK/Washington holidays
    assert len(df) > 70
    assert np.isfinite(df["rv1"]).all()
    assert np.isfinite(df["rk"]).all()


def test_adjustments_file_preserved_verbatim(workspace):
    root, cfg, run = workspace
    copied = root / "store" / "stocks" / "SYN1" / "adjustments.txt"
    assert copied.read_text() == "2024-02-01 split 2:1\n"


def test_clean_report_csv(workspace):
    root, cfg, run = workspace
    lines = (root / "clean_report.csv").read_text().strip().splitlines()
    assert lines[0] == "symbol,date,n_obs,n_outliers"
    assert len(lines) > 70


def test_sample_export(workspace):
    root, cfg, run = workspace
    result = run("sample", "--symbol", "SYN1", "--date", "2024-01-03",
                 "--interval", "300", "--subsample", "5x60")
    lines = result.output.strip().splitlines()
    assert lines[0] == "grid,time_ms,price"
    grids = {int(l.split(",")[0]) for l in lines[1:]}
    assert grids == {0, 1, 2, 3, 4}


def test_fit_batch_summary(workspace):
    root, cfg, run = workspace
    result = run("fit", "--symbol", "SYN1", "--symbol", "SYN2",
                 "--measure", "rv5", "--model", "har", "--min-obs", "30")
    payload = json.loads(result.output)
    assert payload["family"] == "har"
    params = {row["parameter"] for row in payload["summary"]}
    assert params == {"omega", "alpha_d", "alpha_w", "alpha_m"}
    for row in payload["summary"]:
        assert set(row) >= {"mean", "std", "min", "median", "max", "pct_significant"}
    assert len(payload["fits"]) == 2


def test_forecast_command(workspace):
    root, cfg, run = workspace
    result = run("forecast", "--symbol", "SYN1", "--measure", "rv5", "--model", "mem11",
                 "--to", "2024-02-15", "--min-obs", "20")
    fc = json.loads(result.output)
    assert 5 <= fc["horizon"] <= 22
    assert len(fc["point"]) == fc["horizon"]
    assert fc["qlike"] >= 0


def test_export_archive(workspace):
    root, cfg, run = workspace
    out = root / "stocks_variance.zip"
    run("export", "--asset-class", "stocks", "--kind", "variance", "--out", str(out))
    zf = zipfile.ZipFile(io.BytesIO(out.read_bytes()))
    assert {"SYN1.csv", "SYN2.csv", "README.txt"} <= set(zf.namelist())
    out2 = root / "stocks_cov.zip"
    run("export", "--asset-class", "stocks", "--kind", "covariance", "--out", str(out2))
    zf2 = zipfile.ZipFile(io.BytesIO(out2.read_bytes()))
    assert "rcov.csv" in zf2.namelist() and "rscov_mn.csv" in zf2.namelist()


def test_fit_min_obs_refusal_message(workspace):
    root, cfg, run = workspace
    runner = CliRunner()
    result = runner.invoke(main, ["--config", str(cfg), "fit", "--symbol", "SYN1",
                                  "--measure", "rv5", "--model", "har"])
    assert result.exit_code != 0
    assert "750" in result.output
