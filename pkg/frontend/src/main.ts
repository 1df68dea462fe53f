/** Explorer application: three comparison tabs over the read-only API.
 *
 * One central store drives a full re-render per action; events are delegated
 * once from the root node. Every view is a pure rendering of API responses,
 * the full view state round-trips through the URL query string, and column
 * sorting reorders the last payload client-side without refetching. */

import { ApiClient, ApiError } from "./api.js";
import { barChart, chartLegend } from "./chart.js";
import { LANGUAGES, translator, type Translator } from "./i18n.js";
import { canCompare, MAX_COMPARE, toggleSelection } from "./selection.js";
import { sortRows, toggleSort, type SortKey } from "./sort.js";
import { DEFAULT_STATE, decodeState, encodeState, TABS, type TabName, type ViewState } from "./state.js";
import { escapeHtml, renderTable } from "./table.js";
import {
  METRICS,
  type InstitutionPayload,
  type MetaPayload,
  type MetricName,
  type RankingTablePayload,
} from "./types.js";

interface AppData {
  institutions: InstitutionPayload[];
  meta: MetaPayload | null;
  tables: Partial<Record<TabName, RankingTablePayload>>;
  candidates: RankingTablePayload | null;
  notice: string;
}

export interface App {
  state: ViewState;
  data: AppData;
  refresh(): Promise<void>;
  render(): void;
}

const DEBOUNCE_MS = 150;

export function initApp(win: Window, api: ApiClient): App {
  const doc = win.document;
  const mount = doc.getElementById("app");
  if (!mount) throw new Error("missing #app mount point");
  const root: HTMLElement = mount;

  const state: ViewState = decodeState(win.location.search);
  const data: AppData = {
    institutions: [],
    meta: null,
    tables: {},
    candidates: null,
    notice: "",
  };
  let t: Translator = translator(state.lang);
  let debounceTimer: ReturnType<typeof setTimeout> | null = null;

  function syncUrl(): void {
    const encoded = encodeState(state);
    const url = win.location.pathname + (encoded ? `?${encoded}` : "");
    win.history.replaceState(null, "", url);
  }

  function failNotice(error: unknown): void {
    if (error instanceof ApiError) {
      data.notice = t("error.api", { detail: error.message });
    } else if ((error as Error)?.name === "AbortError") {
      return; // superseded by a newer request
    } else {
      data.notice = t("error.network");
    }
    render();
  }

  async function loadActiveTab(): Promise<void> {
    data.notice = "";
    try {
      if (state.tab === "institution") {
        if (!state.institution && data.institutions.length > 0) {
          state.institution = data.institutions[0]!.id;
        }
        if (state.institution) {
          data.tables.institution = await api.institutionRanking(state.institution, {
            metric: state.metric,
            direction: state.direction,
          });
        }
      } else if (state.tab === "thematic") {
        if (state.query.trim()) {
          data.tables.thematic = await api.thematic(state.query, state.exclude, {
            metric: state.metric,
            direction: state.direction,
          });
        } else {
          delete data.tables.thematic;
        }
      } else if (canCompare(state.selected)) {
        data.tables.compare = await api.compare(state.selected, {
          metric: state.metric,
          direction: state.direction,
        });
      }
      syncUrl();
      render();
    } catch (error) {
      failNotice(error);
    }
  }

  async function loadCandidates(query: string): Promise<void> {
    if (!query.trim()) {
      data.candidates = null;
      render();
      return;
    }
    try {
      data.candidates = await api.thematic(query, [], { top: 25 });
      render();
    } catch (error) {
      failNotice(error);
    }
  }

  function metricOptions(): string {
    return METRICS.map(
      (m) =>
        `<option value="${m}"${m === state.metric ? " selected" : ""}>` +
        `${escapeHtml(t(`metric.${m}`))}</option>`,
    ).join("");
  }

  function institutionOptions(): string {
    return data.institutions
      .map(
        (inst) =>
          `<option value="${escapeHtml(inst.id)}"${inst.id === state.institution ? " selected" : ""}>` +
          `${escapeHtml(inst.abbreviation)} — ${escapeHtml(inst.name)}</option>`,
      )
      .join("");
  }

  function renderTabContent(): string {
    const sortable = (table: RankingTablePayload | undefined): string => {
      if (!table) return "";
      if (table.rows.length === 0) return `<p class="empty">${escapeHtml(t("empty.results"))}</p>`;
      const rows = state.sort ? sortRows(table.rows, state.sort) : [...table.rows];
      if (state.tab === "thematic") {
        return renderTable(rows, {
          sort: state.sort,
          t,
          selectable: (row) =>
            `<button type="button" data-exclude="${escapeHtml(row.department_id)}">` +
            `${escapeHtml(t("thematic.exclude"))}</button>`,
        });
      }
      return renderTable(rows, { sort: state.sort, t });
    };

    if (state.tab === "institution") {
      return (
        `<label>${escapeHtml(t("institution.pick"))} ` +
        `<select id="institution-select">${institutionOptions()}</select></label>` +
        `<div class="table-wrap">${sortable(data.tables.institution)}</div>`
      );
    }

    if (state.tab === "thematic") {
      const excluded = state.exclude
        .map(
          (id) =>
            `<li>${escapeHtml(id)} <button type="button" data-include="${escapeHtml(id)}">` +
            `${escapeHtml(t("thematic.include"))}</button></li>`,
        )
        .join("");
      return (
        `<div class="search-row"><input id="thematic-query" type="search" ` +
        `placeholder="${escapeHtml(t("thematic.placeholder"))}" value="${escapeHtml(state.query)}">` +
        `<button type="button" id="thematic-go">${escapeHtml(t("thematic.search"))}</button></div>` +
        (excluded
          ? `<details open><summary>${escapeHtml(t("thematic.excluded"))}</summary><ul>${excluded}</ul></details>`
          : "") +
        `<div class="table-wrap">${sortable(data.tables.thematic)}</div>`
      );
    }

    const chips = state.selected
      .map(
        (id) =>
          `<span class="chip">${escapeHtml(id)}` +
          `<button type="button" data-select="${escapeHtml(id)}" aria-label="remove">×</button></span>`,
      )
      .join("");
    const candidateRows = data.candidates
      ? renderTable(data.candidates.rows, {
          sort: null,
          t,
          selectable: (row) => {
            const chosen = state.selected.includes(row.department_id);
            return (
              `<input type="checkbox" data-select="${escapeHtml(row.department_id)}"` +
              `${chosen ? " checked" : ""}>`
            );
          },
        })
      : "";
    const table = data.tables.compare;
    const chart =
      table && table.rows.length > 0
        ? `<h3>${escapeHtml(t("chart.title"))}</h3>` +
          `<div class="legend-row">${chartLegend([
            t("metric.citations_per_trs"),
            t("metric.citations_per_paper"),
          ])}</div>` +
          `<div class="chart-wrap">${barChart(table.rows)}</div>`
        : "";
    return (
      `<p class="hint">${escapeHtml(t("compare.hint"))}</p>` +
      `<div class="search-row"><input id="compare-query" type="search" ` +
      `placeholder="${escapeHtml(t("thematic.placeholder"))}"></div>` +
      `<div class="candidates table-wrap">${candidateRows}</div>` +
      `<div class="chips">${chips}</div>` +
      `<div class="actions"><button type="button" id="run-compare"` +
      `${canCompare(state.selected) ? "" : " disabled"}>${escapeHtml(t("compare.run"))}</button> ` +
      `<button type="button" id="clear-compare">${escapeHtml(t("compare.clear"))}</button></div>` +
      `<div class="table-wrap">${sortable(table)}</div>` +
      chart
    );
  }

  function render(): void {
    t = translator(state.lang);
    const metaLine = data.meta
      ? `${t("meta.window", {
          start: data.meta.window.start_year,
          end: data.meta.window.end_year,
        })} · ${t("meta.snapshot", { id: data.meta.snapshot_id.slice(0, 12) })}`
      : "";
    const tabButtons = TABS.map(
      (tab) =>
        `<button type="button" data-tab="${tab}" class="tab${tab === state.tab ? " active" : ""}">` +
        `${escapeHtml(t(`tab.${tab}`))}</button>`,
    ).join("");
    const langOptions = LANGUAGES.map(
      (lang) => `<option value="${lang}"${lang === state.lang ? " selected" : ""}>${lang}</option>`,
    ).join("");
    root.innerHTML =
      `<header><h1>${escapeHtml(t("app.title"))}</h1>` +
      `<p class="meta">${escapeHtml(metaLine)}</p>` +
      `<div class="controls">` +
      `<label>${escapeHtml(t("controls.metric"))} <select id="metric-select">${metricOptions()}</select></label>` +
      `<label>${escapeHtml(t("controls.direction"))} <select id="direction-select">` +
      `<option value="desc"${state.direction === "desc" ? " selected" : ""}>${escapeHtml(t("controls.direction.desc"))}</option>` +
      `<option value="asc"${state.direction === "asc" ? " selected" : ""}>${escapeHtml(t("controls.direction.asc"))}</option>` +
      `</select></label>` +
      `<label>${escapeHtml(t("controls.language"))} <select id="lang-select">${langOptions}</select></label>` +
      `</div></header>` +
      `<nav class="tabs">${tabButtons}</nav>` +
      (data.notice ? `<div class="notice" role="alert">${escapeHtml(data.notice)}</div>` : "") +
      `<main>${renderTabContent()}</main>`;
  }

  function handleClick(event: Event): void {
    const target = event.target as HTMLElement | null;
    if (!target) return;
    const tabButton = target.closest("[data-tab]") as HTMLElement | null;
    if (tabButton) {
      state.tab = tabButton.dataset["tab"] as TabName;
      state.sort = null;
      syncUrl();
      render();
      void loadActiveTab();
      return;
    }
    const sortHeader = target.closest("th[data-sort]") as HTMLElement | null;
    if (sortHeader) {
      state.sort = toggleSort(state.sort, sortHeader.dataset["sort"] as SortKey);
      syncUrl();
      render();
      return;
    }
    const exclude = target.closest("[data-exclude]") as HTMLElement | null;
    if (exclude) {
      const id = exclude.dataset["exclude"]!;
      if (!state.exclude.includes(id)) state.exclude = [...state.exclude, id];
      void loadActiveTab();
      return;
    }
    const include = target.closest("[data-include]") as HTMLElement | null;
    if (include) {
      state.exclude = state.exclude.filter((x) => x !== include.dataset["include"]);
      void loadActiveTab();
      return;
    }
    const select = target.closest("[data-select]") as HTMLElement | null;
    if (select) {
      const result = toggleSelection(state.selected, select.dataset["select"]!);
      state.selected = result.selected;
      data.notice = result.blocked ? t("compare.cap") : "";
      syncUrl();
      render();
      return;
    }
    if (target.closest("#run-compare")) {
      if (canCompare(state.selected)) {
        void loadActiveTab();
      } else {
        data.notice = t("compare.need_two");
        render();
      }
      return;
    }
    if (target.closest("#clear-compare")) {
      state.selected = [];
      delete data.tables.compare;
      syncUrl();
      render();
    }
  }

  function handleChange(event: Event): void {
    const target = event.target as HTMLElement | null;
    if (!target) return;
    if (target.id === "metric-select") {
      state.metric = (target as HTMLSelectElement).value as MetricName;
      void loadActiveTab();
    } else if (target.id === "direction-select") {
      state.direction = (target as HTMLSelectElement).value as "asc" | "desc";
      void loadActiveTab();
    } else if (target.id === "lang-select") {
      state.lang = (target as HTMLSelectElement).value;
      syncUrl();
      render();
    } else if (target.id === "institution-select") {
      state.institution = (target as HTMLSelectElement).value;
      void loadActiveTab();
    }
  }

  function handleInput(event: Event): void {
    const target = event.target as HTMLElement | null;
    if (!target) return;
    if (target.id === "thematic-query") {
      state.query = (target as HTMLInputElement).value;
      if (debounceTimer) clearTimeout(debounceTimer);
      debounceTimer = setTimeout(() => {
        syncUrl();
        void loadActiveTab();
      }, DEBOUNCE_MS);
    } else if (target.id === "compare-query") {
      const query = (target as HTMLInputElement).value;
      if (debounceTimer) clearTimeout(debounceTimer);
      debounceTimer = setTimeout(() => void loadCandidates(query), DEBOUNCE_MS);
    }
  }

  root.addEventListener("click", handleClick);
  root.addEventListener("change", handleChange);
  root.addEventListener("input", handleInput);

  async function refresh(): Promise<void> {
    try {
      [data.institutions, data.meta] = await Promise.all([api.institutions(), api.meta()]);
    } catch (error) {
      failNotice(error);
      return;
    }
    await loadActiveTab();
  }

  render();
  return { state, data, refresh, render };
}

export { DEFAULT_STATE };
