"""Bundled asset metadata: names, sectors, exchanges, first available dates.

The catalogue endpoint reports only assets actually present in the measure
store, enriched with this table when the symbol is known.
"""

from __future__ import annotations

import datetime as dt

from rvengine.calendars import AssetClass

_STOCK_FIRST = dt.date(2015, 1, 2)

STOCKS = {
    "AAPL": ("Apple Inc.", "Information Technology"),
    "ADBE": ("Adobe Inc.", "Information Technology"),
    "AMD": ("Advanced Micro Devices", "Information Technology"),
    "AMGN": ("Amgen Inc.", "Health Care"),
    "AMZN": ("Amazon", "Consumer Discretionary"),
    "AXP": ("American Express", "Finance"),
    "BA": ("Boeing", "Industrials"),
    "CAT": ("Caterpillar Inc.", "Industrials"),
    "CRM": ("Salesforce Inc.", "Information Technology"),
    "CSCO": ("Cisco", "Information Technology"),
    "CVX": ("Chevron Corporation", "Energy"),
    "DIS": ("Walt Disney Company (The)", "Communication Services"),
    "GE": ("GE Aerospace", "Industrials"),
    "GOOGL": ("Alphabet Inc. (Class A)", "Communication Services"),
    "GS": ("Goldman Sachs", "Finance"),
    "HD": ("Home Depot", "Consumer Discretionary"),
    "HON": ("Honeywell International Inc.", "Industrials"),
    "IBM": ("IBM", "Information Technology"),
    "JNJ": ("Johnson & Johnson", "Health Care"),
    "JPM": ("JPMorgan Chase", "Finance"),
    "KO": ("Coca-Cola Company (The)", "Consumer Staples"),
    "MCD": ("McDonald's", "Consumer Discretionary"),
    "META": ("Meta Platforms", "Communication Services"),
    "MMM": ("3M", "Industrials"),
    "MRK": ("Merck & Company Inc.", "Health Care"),
    "MSFT": ("Microsoft", "Information Technology"),
    "NFLX": ("Netflix, Inc.", "Communication Services"),
    "NKE": ("Nike, Inc.", "Consumer Discretionary"),
    "NVDA": ("Nvidia", "Information Technology"),
    "ORCL": ("Oracle Corporation", "Information Technology"),
    "PG": ("Procter & Gamble", "Consumer Staples"),
    "PM": ("Philip Morris International", "Consumer Staples"),
    "SHW": ("Sherwin-Williams Company", "Consumer Discretionary"),
    "TRV": ("The Travelers Companies Inc.", "Finance"),
    "TSLA": ("Tesla, Inc.", "Consumer Discretionary"),
    "UNH": ("Unitedhealth Group Inc.", "Health Care"),
    "V": ("Visa Inc.", "Finance"),
    "VZ": ("Verizon Communications Inc.", "Public Utilities"),
    "WMT": ("Walmart", "Consumer Staples"),
    "XOM": ("ExxonMobil", "Energy"),
}

EXCHANGE_RATES = {
    "AUDUSD": ("Australian dollar / US dollar", dt.date(2009, 9, 25)),
    "EURUSD": ("Euro / US dollar", dt.date(2009, 9, 25)),
    "GBPUSD": ("British pound / US dollar", dt.date(2009, 9, 25)),
    "USDCAD": ("US dollar / Canadian dollar", dt.date(2009, 9, 25)),
    "USDJPY": ("US dollar / Japanese yen", dt.date(2009, 9, 28)),
}

FUTURES = {
    "CL": ("Crude Oil", "Energy", "NYMEX"),
    "NG": ("Natural Gas", "Energy", "NYMEX"),
    "GC": ("Gold", "Metals", "COMEX"),
    "C": ("Corn", "Agricultural", "CME"),
    "ES": ("E-mini S&P 500", "Equity Index", "CME"),
}
_FUTURE_FIRST = dt.date(2009, 9, 28)


def describe(asset_class: AssetClass, symbol: str) -> dict:
    """Catalogue entry for one symbol; unknown symbols get minimal metadata."""
    if asset_class is AssetClass.STOCK and symbol in STOCKS:
        name, sector = STOCKS[symbol]
        return {"symbol": symbol, "name": name, "sector": sector,
                "first_date": _STOCK_FIRST.isoformat()}
    if asset_class is AssetClass.EXCHANGE_RATE and symbol in EXCHANGE_RATES:
        name, first = EXCHANGE_RATES[symbol]
        return {"symbol": symbol, "name": name, "sector": None, "first_date": first.isoformat()}
    if asset_class is AssetClass.FUTURE and symbol in FUTURES:
        name, sector, exchange = FUTURES[symbol]
        return {"symbol": symbol, "name": name, "sector": sector, "exchange": exchange,
                "first_date": _FUTURE_FIRST.isoformat()}
    return {"symbol": symbol, "name": symbol, "sector": None, "first_date": None}
