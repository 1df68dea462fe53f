"""Operator CLI: ingest, resolve, fetch, compute, rank, export, serve.

Each command prints a human-readable table followed by one machine-readable
JSON summary line. Exit codes: 0 success, 1 validation error, 2 transport
error. Commands are re-runnable; state lives in a workspace directory and
snapshots are content-addressed, so repeating a command changes nothing.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

import click

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - py3.10 fallback
    import tomli as tomllib

from . import snapshot as snapshot_store
from .metrics import Override
from .model import (
    AuthorId,
    DomainError,
    NotFoundError,
    Publication,
    ValidationError,
    YearWindow,
    normalize_text,
)
from .providers import (
    CredentialError,
    FixtureProvider,
    Gateway,
    PartialFetchError,
    ProviderConfig,
    ResponseCache,
    ScopusProvider,
    TransportError,
)
from .ranking import Direction, Metric, compare_adhoc, rank_institution, rank_thematic
from .registry import Registry, propose_merges
from .render import human_table, ranking_human_rows, table_json
from .serialize import publication_from_json, publication_to_json

log = logging.getLogger(__name__)

CREDENTIAL_ENV_VAR = "BIBLIO_API_KEY"


class AppContext:
    def __init__(self, config_path: Optional[Path], data_dir: Optional[Path]) -> None:
        self.config = _load_config(config_path)
        workspace = data_dir or Path(self.config.get("workspace", {}).get("dir", "workspace"))
        self.workspace = Path(workspace)

    @property
    def registry_path(self) -> Path:
        return self.workspace / "registry.json"

    @property
    def audit_path(self) -> Path:
        return self.workspace / "audit.log"

    @property
    def fetched_path(self) -> Path:
        return self.workspace / "fetched.json"

    @property
    def cache_dir(self) -> Path:
        return self.workspace / "cache"

    @property
    def snapshots_dir(self) -> Path:
        return self.workspace / "snapshots"

    def load_registry(self) -> Registry:
        if not self.registry_path.is_file():
            raise ValidationError(
                f"no registry at {self.registry_path}; run 'ingest' first"
            )
        return Registry.load(self.registry_path, audit_path=self.audit_path)

    def provider_config(self, kind: str = "scopus", **overrides) -> ProviderConfig:
        section = dict(self.config.get("provider", {}))
        section.update({k: v for k, v in overrides.items() if v is not None})
        ttl_days = float(section.get("cache_ttl_days", 30.0))
        # The fixture provider reads local files; only remote APIs need the
        # conservative default budget.
        default_budget = 6 if kind == "scopus" else 10_000
        return ProviderConfig(
            base_endpoint=section.get("base_endpoint", ""),
            credential=os.environ.get(CREDENTIAL_ENV_VAR, ""),
            rate_limit_requests=int(section.get("rate_limit_requests", default_budget)),
            rate_limit_window=float(section.get("rate_limit_window", 1.0)),
            page_size=int(section.get("page_size", 25)),
            max_retries=int(section.get("max_retries", 3)),
            backoff_base=float(section.get("backoff_base", 0.5)),
            cache_ttl=ttl_days * 86400.0,
        )

    def make_gateway(
        self, provider_kind: Optional[str], fixture_dir: Optional[str], **overrides
    ) -> Gateway:
        kind = provider_kind or self.config.get("provider", {}).get("kind", "fixture")
        config = self.provider_config(kind, **overrides)
        if kind == "fixture":
            root = fixture_dir or self.config.get("provider", {}).get("fixture_dir")
            if not root:
                raise ValidationError("fixture provider needs --fixture-dir")
            provider = FixtureProvider(root)
        elif kind == "scopus":
            if not config.credential:
                raise ValidationError(
                    f"scopus provider needs the {CREDENTIAL_ENV_VAR} environment variable"
                )
            provider = ScopusProvider(config)
        else:
            raise ValidationError(f"unknown provider: {kind!r}")
        cache = ResponseCache(self.cache_dir, ttl=config.cache_ttl)
        return Gateway(provider, config, cache=cache)

    def pick_snapshot(self, snapshot_id: Optional[str]) -> snapshot_store.Snapshot:
        if snapshot_id:
            return snapshot_store.load(self.snapshots_dir, snapshot_id)
        listed = snapshot_store.list_snapshots(self.snapshots_dir)
        if not listed:
            raise ValidationError("no snapshots yet; run 'compute' first")
        return snapshot_store.load(self.snapshots_dir, listed[-1][0])


def _load_config(path: Optional[Path]) -> dict:
    candidates = [path] if path else [Path("deptmetrics.toml")]
    for candidate in candidates:
        if candidate and candidate.is_file():
            with open(candidate, "rb") as handle:
                return tomllib.load(handle)
    if path:
        raise ValidationError(f"config file not found: {path}")
    return {}


def _emit(summary: dict) -> None:
    click.echo(json.dumps(summary, ensure_ascii=False, sort_keys=True))


@click.group()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None)
@click.option("--data-dir", type=click.Path(path_type=Path), default=None)
@click.option("--verbose", is_flag=True, default=False)
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[Path], data_dir: Optional[Path], verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = AppContext(config_path, data_dir)


@cli.command()
@click.option("--roster", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--institutions", type=click.Path(exists=True, path_type=Path), default=None)
@click.pass_obj
def ingest(app: AppContext, roster: Path, institutions: Optional[Path]) -> None:
    """Ingest a roster CSV (idempotent upsert)."""
    if app.registry_path.is_file():
        registry = Registry.load(app.registry_path, audit_path=app.audit_path)
    else:
        registry = Registry(audit_path=app.audit_path)
    if institutions:
        registry.load_institution_list(institutions)
    if not registry.known_institutions:
        raise ValidationError(
            "no institution list loaded; pass --institutions on the first ingest"
        )
    report = registry.ingest_roster(roster)
    registry.save(app.registry_path)
    for warning in report.warnings:
        click.echo(f"warning: {warning}", err=True)
    rows = sorted(report.member_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    click.echo(human_table(["institution", "members"], rows))
    _emit(
        {
            "command": "ingest",
            "created_institutions": report.created_institutions,
            "created_departments": report.created_departments,
            "created_members": report.created_members,
            "updated_members": report.updated_members,
            "unchanged_members": report.unchanged_members,
            "empty_delta": report.empty_delta,
        }
    )


@cli.command()
@click.option("--department", "department_query", required=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--provider", "provider_kind", type=click.Choice(["scopus", "fixture"]), default=None)
@click.option("--fixture-dir", type=click.Path(exists=True), default=None)
@click.pass_obj
def resolve(
    app: AppContext,
    department_query: str,
    out: Optional[Path],
    provider_kind: Optional[str],
    fixture_dir: Optional[str],
) -> None:
    """Search candidate profiles for a department and rank merge pairs."""
    registry = app.load_registry()
    query = normalize_text(department_query)
    matches = [
        d for d in registry.departments.values() if query in normalize_text(d.name)
    ]
    if not matches:
        raise NotFoundError(f"no department matching {department_query!r}")
    if len(matches) > 1:
        names = ", ".join(sorted(d.id for d in matches))
        raise ValidationError(f"ambiguous department {department_query!r}: {names}")
    department = matches[0]
    institution = registry.institutions[department.institution_id]
    gateway = app.make_gateway(provider_kind, fixture_dir)

    worksheet_rows = []
    members = sorted(
        (m for m in registry.members.values() if m.department_id == department.id),
        key=lambda m: m.id,
    )
    for member in members:
        candidates = gateway.search_authors(
            member.display_name, affiliation_hint=institution.abbreviation
        )
        if member.author_ids:
            anchor = member.author_ids[0]
            if all(c.author_id != anchor for c in candidates):
                candidates = [gateway.get_author_profile(anchor), *candidates]
            for candidate in propose_merges(member, candidates):
                worksheet_rows.append(
                    {
                        "kind": "merge-candidate",
                        "member_id": member.id,
                        "member": member.display_name,
                        "profile_a": candidate.profile_a.token,
                        "profile_b": candidate.profile_b.token,
                        "score": f"{float(candidate.score):.4f}",
                        "evidence": "; ".join(
                            f"{e.kind}={e.value} ({e.detail})" for e in candidate.evidence
                        ),
                    }
                )
        else:
            for record in candidates:
                worksheet_rows.append(
                    {
                        "kind": "search-candidate",
                        "member_id": member.id,
                        "member": member.display_name,
                        "profile_a": "",
                        "profile_b": record.author_id.token,
                        "score": "",
                        "evidence": f"indexed_name={record.indexed_name}",
                    }
                )
    out = out or Path(f"{department.id}-worksheet.csv")
    with open(out, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(
            handle,
            fieldnames=[
                "kind", "member_id", "member", "profile_a", "profile_b", "score", "evidence",
            ],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(worksheet_rows)
    click.echo(
        human_table(
            ["member", "kind", "candidate", "score"],
            [
                [r["member"], r["kind"], r["profile_b"], r["score"]]
                for r in worksheet_rows
            ],
        )
    )
    _emit(
        {
            "command": "resolve",
            "department_id": department.id,
            "members": len(members),
            "worksheet": str(out),
            "rows": len(worksheet_rows),
        }
    )


@cli.command()
@click.option("--window", "window_text", required=True)
@click.option("--provider", "provider_kind", type=click.Choice(["scopus", "fixture"]), default=None)
@click.option("--fixture-dir", type=click.Path(exists=True), default=None)
@click.option("--parallel", type=int, default=4, show_default=True)
@click.pass_obj
def fetch(
    app: AppContext,
    window_text: str,
    provider_kind: Optional[str],
    fixture_dir: Optional[str],
    parallel: int,
) -> None:
    """Fetch in-window publications for every resolved member."""
    window = YearWindow.parse(window_text)
    registry = app.load_registry()
    members = [m for m in sorted(registry.members.values(), key=lambda m: m.id) if m.author_ids]
    if not members:
        raise ValidationError("registry has no members with author ids; ingest a roster first")
    gateway = app.make_gateway(provider_kind, fixture_dir)

    def fetch_member(member):
        return member.id, gateway.fetch_publications(member.author_ids, window)

    by_doc: dict[str, Publication] = {}
    receipts = []
    with ThreadPoolExecutor(max_workers=max(1, parallel)) as pool:
        for member_id, (pubs, receipt) in pool.map(fetch_member, members):
            receipts.append(receipt)
            for pub in pubs:
                current = by_doc.get(pub.doc_id)
                if current is None or pub.citation_count > current.citation_count:
                    by_doc[pub.doc_id] = pub
    publications = sorted(by_doc.values(), key=lambda p: (p.year, p.doc_id))

    payload = {
        "window": str(window),
        "publications": [publication_to_json(p) for p in publications],
        "receipts": [snapshot_store.receipt_to_json(r) for r in receipts],
    }
    app.fetched_path.parent.mkdir(parents=True, exist_ok=True)
    tmp = app.fetched_path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, ensure_ascii=False) + "\n", encoding="utf-8")
    tmp.replace(app.fetched_path)

    pages = sum(r.pages_fetched for r in receipts)
    hits = sum(r.cache_hits for r in receipts)
    click.echo(
        human_table(
            ["members", "publications", "pages", "cache_hits"],
            [[len(members), len(publications), pages, hits]],
        )
    )
    _emit(
        {
            "command": "fetch",
            "window": str(window),
            "members": len(members),
            "publications": len(publications),
            "pages_fetched": pages,
            "cache_hits": hits,
        }
    )


@cli.command()
@click.pass_obj
def compute(app: AppContext) -> None:
    """Compute department metrics and write a content-addressed snapshot."""
    registry = app.load_registry()
    if not app.fetched_path.is_file():
        raise ValidationError("no fetched publications; run 'fetch' first")
    payload = json.loads(app.fetched_path.read_text(encoding="utf-8"))
    window = YearWindow.parse(payload["window"])
    publications = [publication_from_json(p) for p in payload["publications"]]
    receipts = [
        snapshot_store.receipt_from_json(r) for r in payload.get("receipts", ())
    ]
    institutions, departments, members, overrides = registry.snapshot_inputs()
    base = snapshot_store.make_snapshot(
        window=window,
        institutions=institutions,
        departments=departments,
        members=members,
        publications=publications,
        overrides=overrides,
        provenance=receipts,
    )
    metrics = snapshot_store.compute_all_metrics(base)
    final = snapshot_store.with_metrics(base, metrics)
    snapshot_id = snapshot_store.save(final, app.snapshots_dir)
    click.echo(
        human_table(
            ["snapshot", "departments", "publications"],
            [[snapshot_id[:12], len(metrics), len(publications)]],
        )
    )
    _emit(
        {
            "command": "compute",
            "snapshot_id": snapshot_id,
            "departments": len(metrics),
            "publications": len(publications),
        }
    )


def _institution_by_ref(snapshot, ref: str) -> str:
    wanted = normalize_text(ref)
    for inst in snapshot.institutions:
        if wanted in (normalize_text(inst.abbreviation), normalize_text(inst.id)):
            return inst.id
    raise NotFoundError(f"unknown institution: {ref}")


@cli.command()
@click.option("--institution", "institution_ref", default=None)
@click.option("--query", "query_text", default=None)
@click.option("--departments", "department_ids", default=None)
@click.option("--exclude", default=None)
@click.option("--metric", "metric_name", default=Metric.CITATIONS_PER_TRS.value,
              type=click.Choice([m.value for m in Metric]), show_default=True)
@click.option("--top", type=int, default=None)
@click.option("--direction", type=click.Choice(["asc", "desc"]), default="desc", show_default=True)
@click.option("--snapshot", "snapshot_id", default=None)
@click.pass_obj
def rank(
    app: AppContext,
    institution_ref: Optional[str],
    query_text: Optional[str],
    department_ids: Optional[str],
    exclude: Optional[str],
    metric_name: str,
    top: Optional[int],
    direction: str,
    snapshot_id: Optional[str],
) -> None:
    """Rank departments: one institution, a thematic query, or an ad-hoc set."""
    chosen = [x for x in (institution_ref, query_text, department_ids) if x]
    if len(chosen) != 1:
        raise ValidationError(
            "pass exactly one of --institution, --query, --departments"
        )
    snapshot = app.pick_snapshot(snapshot_id)
    metric = Metric(metric_name)
    dir_enum = Direction(direction)
    if institution_ref:
        table = rank_institution(
            snapshot,
            _institution_by_ref(snapshot, institution_ref),
            metric,
            k=top,
            direction=dir_enum,
        )
    elif query_text:
        excluded = [x.strip() for x in (exclude or "").split(",") if x.strip()]
        table = rank_thematic(
            snapshot, query_text.split(), exclude=excluded, metric=metric, k=top,
            direction=dir_enum,
        )
    else:
        ids = [x.strip() for x in (department_ids or "").split(",") if x.strip()]
        table = compare_adhoc(snapshot, ids, metric, direction=dir_enum)
    departments = {d.id: d for d in snapshot.departments}
    institutions = {i.id: i for i in snapshot.institutions}
    payload = table_json(table, departments, institutions)
    headers, rows = ranking_human_rows(payload)
    click.echo(human_table(headers, rows))
    _emit({"command": "rank", "snapshot_id": snapshot.snapshot_id, "table": payload})


@cli.command()
@click.option("--format", "format_name", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--snapshot", "snapshot_id", default=None)
@click.pass_obj
def export(
    app: AppContext, format_name: str, out: Path, snapshot_id: Optional[str]
) -> None:
    """Write the full per-department table, grouped by institution."""
    snapshot = app.pick_snapshot(snapshot_id)
    data = snapshot_store.export_full_table(snapshot, format_name)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(data)
    click.echo(f"wrote {out} ({len(data)} bytes)")
    _emit(
        {
            "command": "export",
            "snapshot_id": snapshot.snapshot_id,
            "format": format_name,
            "out": str(out),
            "bytes": len(data),
        }
    )


@cli.command()
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.option("--snapshot", "snapshot_id", default=None)
@click.option("--ui-dir", type=click.Path(path_type=Path), default=None)
@click.pass_obj
def serve(app: AppContext, addr: str, snapshot_id: Optional[str], ui_dir: Optional[Path]) -> None:
    """Serve the read-only comparison API over a snapshot."""
    import uvicorn

    from .api import create_app

    snapshot = app.pick_snapshot(snapshot_id)
    host, _, port_text = addr.partition(":")
    if not port_text.isdigit():
        raise ValidationError(f"--addr must look like host:port, got {addr!r}")
    _emit(
        {
            "command": "serve",
            "snapshot_id": snapshot.snapshot_id,
            "addr": addr,
        }
    )
    uvicorn.run(create_app(snapshot, ui_dir=ui_dir), host=host or "127.0.0.1", port=int(port_text))


def main(argv: Optional[list[str]] = None) -> None:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(130)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(1)
    except (ValidationError, NotFoundError, DomainError, CredentialError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except (TransportError, PartialFetchError) as exc:
        click.echo(f"transport error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
