import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rvengine.calendars import AssetClass, OddLotRule, TradingSession
from rvengine.errors import ParseError
from rvengine.ticks import (
    FLAG_OFF_HOURS,
    FLAG_VALID,
    TickSeries,
    aggregate_same_timestamp,
    flag_odd_lots,
    parse_tick_file,
)
from tests.conftest import make_stock_series


def _write(tmp_path, name, lines):
    p = tmp_path / "stocks" / "TEST"
    p.mkdir(parents=True, exist_ok=True)
    f = p / name
    f.write_text("\n".join(lines) + ("\n" if lines else ""))
    return f


class TestParse:
    def test_same_timestamp_rows_preserved(self, tmp_path, calendar):
        f = _write(tmp_path, "2024_03_11.csv",
                   ["09:30:00.001,100.0,50,1", "09:30:00.001,100.2,150,1"])
        s = parse_tick_file(f, AssetClass.STOCK, calendar=calendar)
        assert len(s) == 2
        assert s.times[0] == s.times[1]
        assert s.symbol == "TEST" and s.date == dt.date(2024, 3, 11)
        assert np.all(s.flags == FLAG_VALID)

    def test_early_close_day_flags_afternoon_off_hours(self, tmp_path, calendar):
        f = _write(tmp_path, "2024_11_29.csv",
                   ["10:00:00.000,100.0,100,1", "16:03:00.000,101.0,100,1"])
        s = parse_tick_file(f, AssetClass.STOCK, calendar=calendar)
        assert s.flags[0] == FLAG_VALID
        assert s.flags[1] == FLAG_OFF_HOURS

    def test_non_numeric_price_names_row(self, tmp_path, calendar):
        f = _write(tmp_path, "2024_03_11.csv",
                   ["09:30:00.000,100.0,50,1", "09:30:01.000,oops,50,1"])
        with pytest.raises(ParseError) as err:
            parse_tick_file(f, AssetClass.STOCK, calendar=calendar)
        assert err.value.line == 2

    def test_empty_file_gives_empty_series(self, tmp_path, calendar):
        f = _write(tmp_path, "2024_03_11.csv", [])
        s = parse_tick_file(f, AssetClass.STOCK, calendar=calendar)
        assert len(s) == 0

    def test_quote_file_and_premarket_flag(self, tmp_path, calendar):
        p = tmp_path / "exchange rates" / "EURUSD"
        p.mkdir(parents=True)
        f = p / "2024_03_11.csv"
        f.write_text("01:00:00,1.11,1.10,1.12,0,0\n")
        s = parse_tick_file(f, AssetClass.EXCHANGE_RATE, calendar=calendar)
        assert s.bids[0] == 1.10 and s.asks[0] == 1.12
        assert s.flags[0] == FLAG_VALID  # FX trades around the clock midweek


class TestAggregate:
    def test_stock_vwap_example(self, stock_session):
        t = stock_session.open_ms + 1000
        s = make_stock_series([t, t], [100.0, 100.2], volumes=[50, 150])
        out = aggregate_same_timestamp(s)
        assert len(out) == 1
        assert out.prices[0] == pytest.approx((100.0 * 50 + 100.2 * 150) / 200, abs=1e-12)
        assert out.volumes[0] == 200
        assert out.trades[0] == 2

    def test_fx_median_of_three(self):
        times = np.array([3_600_000] * 3, dtype=np.int64)
        s = TickSeries(
            symbol="EURUSD", date=dt.date(2024, 3, 11), asset_class=AssetClass.EXCHANGE_RATE,
            times=times,
            prices=np.array([1.11, 1.12, 1.13]),
            flags=np.ones(3),
            bids=np.array([1.10, 1.11, 1.12]),
            asks=np.array([1.12, 1.13, 1.14]),
        )
        out = aggregate_same_timestamp(s)
        assert len(out) == 1
        assert out.bids[0] == 1.11
        assert out.asks[0] == 1.13
        assert out.volumes is None and out.trades is None

    def test_single_record_unchanged(self, stock_session):
        s = make_stock_series([stock_session.open_ms], [100.0], volumes=[10])
        out = aggregate_same_timestamp(s)
        assert len(out) == 1 and out.prices[0] == 100.0

    def test_zero_volume_falls_back_to_mean(self, stock_session):
        t = stock_session.open_ms
        s = make_stock_series([t, t], [100.0, 102.0], volumes=[0, 0])
        out = aggregate_same_timestamp(s)
        assert out.prices[0] == pytest.approx(101.0)

    @given(st.integers(min_value=1, max_value=200), st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=25, deadline=None)
    def test_idempotent_and_conserving(self, n, seed):
        rng = np.random.default_rng(seed)
        times = np.sort(rng.integers(34_200_000, 57_900_000, size=n)).astype(np.int64)
        prices = rng.uniform(10, 20, size=n)
        vols = rng.integers(1, 500, size=n)
        s = make_stock_series(times, prices, volumes=vols)
        once = aggregate_same_timestamp(s)
        twice = aggregate_same_timestamp(once)
        assert np.all(np.diff(once.times) > 0)
        np.testing.assert_array_equal(once.times, twice.times)
        np.testing.assert_allclose(once.prices, twice.prices, rtol=0)
        assert once.volumes.sum() == vols.sum()
        # collapsed price stays inside the collapsed range
        for g, t in enumerate(once.times):
            grp = prices[times == t]
            assert grp.min() - 1e-12 <= once.prices[g] <= grp.max() + 1e-12


class TestOddLots:
    @pytest.mark.parametrize("volume,expected", [(99, True), (100, False), (3500, False)])
    def test_threshold_is_strict_below(self, stock_session, volume, expected):
        s = make_stock_series([stock_session.open_ms], [100.0], volumes=[volume])
        out = flag_odd_lots(s)
        assert bool(out.odd_lot[0]) is expected

    def test_override_rule(self, stock_session):
        s = make_stock_series([stock_session.open_ms], [100.0], volumes=[500])
        out = flag_odd_lots(s, OddLotRule(1000))
        assert bool(out.odd_lot[0]) is True

    def test_never_deletes_records(self, stock_session):
        s = make_stock_series(
            [stock_session.open_ms, stock_session.open_ms + 1], [100.0, 100.1], volumes=[5, 500]
        )
        out = flag_odd_lots(s)
        assert len(out) == 2

    def test_missing_volume_treated_round_lot(self, stock_session):
        s = make_stock_series([stock_session.open_ms], [100.0], volumes=[-1])
        out = flag_odd_lots(s)
        assert bool(out.odd_lot[0]) is False

    def test_rejects_non_stock(self):
        s = TickSeries(
            symbol="EURUSD", date=dt.date(2024, 3, 11), asset_class=AssetClass.EXCHANGE_RATE,
            times=np.array([0], dtype=np.int64), prices=np.array([1.1]), flags=np.ones(1),
        )
        with pytest.raises(ValueError):
            flag_odd_lots(s)
