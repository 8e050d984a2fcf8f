# data/processors/csv_processor.py
import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Sequence
import logging

import pandas as pd

from data.models import (
    Phase,
    PeriodReport,
    RunManifest,
    ScenarioConfig,
    TraceSample,
    TransactionLedger,
    format_rational,
    holder_label,
)

logger = logging.getLogger(__name__)

ARTIFACT_VERSION = "1.0.0"

PERIOD_COLUMNS = [
    "period",
    *(f"tx_{phase.value}" for phase in Phase),
    "tx_total", "t_k", "waste", "absorbed", "freed", "freed_goods", "np_served",
    "supportable_np", "redeemed", "e_r_issued", "e_t_issued", "total_issued",
    "environment_redeemed", "agency_currency", "reservation_currency", "liquidity",
    "e_t_term", "money_demand", "type1_index", "supply_status", "price_per_unit",
    "type2_index",
]
ASSET_COLUMNS = ["period", "asset", "dispersity", "concentration", "over_reference"]
HOLDING_COLUMNS = ["period", "holder", "asset", "qty"]
ACCOUNT_COLUMNS = ["period", "kind", "produced", "redeemed", "consumed", "expired", "seeded", "absorbed"]
LEDGER_COLUMNS = ["period", "seq", "phase", "from", "to", "kind", "qty", "currency"]


def fmt(value: Any) -> str:
    """Fixed text form: integers bare, rationals p/q, floats to 6 places."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (Fraction, float)):
        return format_rational(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def config_hash(config: ScenarioConfig) -> str:
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class CSVProcessor:
    def __init__(self, out_dir: str):
        self.out_dir = Path(out_dir)
        self.written: Dict[str, str] = {}

    @staticmethod
    def frame(rows: List[Dict[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
        return pd.DataFrame([{c: fmt(row.get(c)) for c in columns} for row in rows], columns=list(columns))

    def _write(self, name: str, rows: List[Dict[str, Any]], columns: Sequence[str]) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        frame = self.frame(rows, columns)
        frame.to_csv(path, index=False, lineterminator="\n")
        self.written[name.split(".")[0]] = name
        logger.info(f"  ✅ Wrote {name}: {len(frame)} rows")
        return path

    def write_periods(self, reports: Sequence[PeriodReport]) -> Path:
        rows = []
        for r in reports:
            row = {c: getattr(r, c) for c in PERIOD_COLUMNS if c in PeriodReport.model_fields}
            for phase in Phase:
                row[f"tx_{phase.value}"] = r.transactions.get(phase.value, 0)
            row["tx_total"] = r.transaction_count
            rows.append(row)
        return self._write("periods.csv", rows, PERIOD_COLUMNS)

    def write_assets(self, reports: Sequence[PeriodReport]) -> Path:
        rows = [
            {"period": r.period, **{k: getattr(a, k) for k in ASSET_COLUMNS[1:]}}
            for r in reports for a in r.assets
        ]
        return self._write("assets.csv", rows, ASSET_COLUMNS)

    def write_holdings(self, reports: Sequence[PeriodReport]) -> Path:
        rows = [
            {"period": r.period, "holder": holder, "asset": asset, "qty": qty}
            for r in reports
            for holder, assets in r.holdings.items()
            for asset, qty in assets.items()
            if qty
        ]
        return self._write("holdings.csv", rows, HOLDING_COLUMNS)

    def write_accounts(self, reports: Sequence[PeriodReport]) -> Path:
        rows = [
            {"period": r.period, **a.model_dump()}
            for r in reports for a in r.accounts
        ]
        return self._write("accounts.csv", rows, ACCOUNT_COLUMNS)

    def write_ledger(self, ledgers: Sequence[TransactionLedger], periods: Sequence[int]) -> Path:
        rows = []
        for period, ledger in zip(periods, ledgers):
            for tx in ledger.transactions:
                moves = [(f"G{k}", q) for k, q in tx.goods] + [(f"R{k}", q) for k, q in tx.reservation]
                if not moves:
                    moves = [(None, None)]
                for index, (kind, qty) in enumerate(moves):
                    rows.append({
                        "period": period,
                        "seq": tx.seq,
                        "phase": tx.phase,
                        "from": holder_label(tx.sender),
                        "to": holder_label(tx.receiver),
                        "kind": kind,
                        "qty": qty,
                        "currency": tx.currency if index == 0 else None,
                    })
        return self._write("ledger.csv", rows, LEDGER_COLUMNS)

    @staticmethod
    def trace_rows(samples: Sequence[TraceSample]):
        series = list(samples[0].concentrations) if samples else []
        rows = [
            {"period": s.period, "seq": s.seq, "phase": s.phase, **s.concentrations}
            for s in samples
        ]
        return rows, ["period", "seq", "phase", *series]

    def write_trace(self, samples: Sequence[TraceSample], name: str = "trace.csv") -> Path:
        rows, columns = self.trace_rows(samples)
        return self._write(name, rows, columns)

    def write_manifest(self, config: ScenarioConfig) -> Path:
        manifest = RunManifest(
            config_hash=config_hash(config),
            artifact_version=ARTIFACT_VERSION,
            outputs=dict(sorted(self.written.items())),
            rng_seed=config.rng_seed,
        )
        path = self.out_dir / "manifest.json"
        path.write_text(json.dumps(manifest.model_dump(), indent=2, sort_keys=True) + "\n")
        logger.info(f"  ✅ Wrote manifest.json ({manifest.config_hash[:12]})")
        return path

    def write_run(self, config: ScenarioConfig, reports: Sequence[PeriodReport],
                  ledgers: Sequence[TransactionLedger], trace: Sequence[TraceSample]) -> RunManifest:
        """Write every artifact of one scenario run"""
        exchange_periods = [r.period for r in reports if r.transactions]
        self.write_periods(reports)
        self.write_assets(reports)
        self.write_holdings(reports)
        self.write_accounts(reports)
        self.write_ledger(ledgers, exchange_periods)
        self.write_trace(trace)
        self.write_manifest(config)
        return RunManifest.model_validate_json((self.out_dir / "manifest.json").read_text())
