/** Full view state lives in URL query parameters so comparisons are
 * shareable links; decode tolerates anything malformed. */

import type { SortKey, SortState } from "./sort.js";
import { SORTABLE_COLUMNS } from "./sort.js";
import { METRICS, type MetricName } from "./types.js";

export const TABS = ["institution", "thematic", "compare"] as const;
export type TabName = (typeof TABS)[number];

export interface ViewState {
  tab: TabName;
  institution: string;
  query: string;
  exclude: string[];
  selected: string[];
  metric: MetricName;
  direction: "asc" | "desc";
  sort: SortState | null;
  lang: string;
}

export const DEFAULT_STATE: ViewState = {
  tab: "institution",
  institution: "",
  query: "",
  exclude: [],
  selected: [],
  metric: "citations_per_trs",
  direction: "desc",
  sort: null,
  lang: "en",
};

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  const put = (key: string, value: string) => {
    if (value) params.set(key, value);
  };
  if (state.tab !== DEFAULT_STATE.tab) put("tab", state.tab);
  put("inst", state.institution);
  put("q", state.query);
  put("exclude", state.exclude.join(","));
  put("ids", state.selected.join(","));
  if (state.metric !== DEFAULT_STATE.metric) put("metric", state.metric);
  if (state.direction !== DEFAULT_STATE.direction) put("dir", state.direction);
  if (state.sort) {
    put("sort", state.sort.key);
    if (!state.sort.ascending) put("sortdir", "desc");
  }
  if (state.lang !== DEFAULT_STATE.lang) put("lang", state.lang);
  return params.toString();
}

function csv(value: string | null): string[] {
  if (!value) return [];
  return value
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

export function decodeState(search: string): ViewState {
  const params = new URLSearchParams(search);
  const tab = params.get("tab");
  const metric = params.get("metric");
  const direction = params.get("dir");
  const sortKey = params.get("sort");
  const state: ViewState = {
    ...DEFAULT_STATE,
    exclude: csv(params.get("exclude")),
    selected: csv(params.get("ids")),
    institution: params.get("inst") ?? "",
    query: params.get("q") ?? "",
    lang: params.get("lang") ?? DEFAULT_STATE.lang,
  };
  if (tab && (TABS as readonly string[]).includes(tab)) {
    state.tab = tab as TabName;
  }
  if (metric && (METRICS as readonly string[]).includes(metric)) {
    state.metric = metric as MetricName;
  }
  if (direction === "asc" || direction === "desc") {
    state.direction = direction;
  }
  if (sortKey && (SORTABLE_COLUMNS as readonly string[]).includes(sortKey)) {
    state.sort = {
      key: sortKey as SortKey,
      ascending: params.get("sortdir") !== "desc",
    };
  }
  return state;
}
