import { describe, expect, it } from "vitest";

import { DEFAULT_STATE, decodeState, encodeState, type ViewState } from "../src/state.js";

describe("view state URL round-trip", () => {
  it("encodes only non-defaults", () => {
    expect(encodeState({ ...DEFAULT_STATE })).toBe("");
  });

  it("round-trips a full comparison view", () => {
    const state: ViewState = {
      tab: "compare",
      institution: "auth",
      query: "physics",
      exclude: ["d1", "d2"],
      selected: ["a", "b", "c"],
      metric: "citations_per_paper",
      direction: "asc",
      sort: { key: "paper_count", ascending: false },
      lang: "el",
    };
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("tolerates malformed values with defaults", () => {
    const state = decodeState("tab=bogus&metric=h_index&dir=sideways&sort=nope");
    expect(state.tab).toBe(DEFAULT_STATE.tab);
    expect(state.metric).toBe(DEFAULT_STATE.metric);
    expect(state.direction).toBe(DEFAULT_STATE.direction);
    expect(state.sort).toBeNull();
  });

  it("parses comma lists and strips empties", () => {
    const state = decodeState("ids=a,,b,&exclude=x");
    expect(state.selected).toEqual(["a", "b"]);
    expect(state.exclude).toEqual(["x"]);
  });
});
