import { describe, expect, it } from "vitest";

import {
  competitionRanking,
  rankNext,
  rankedLabels,
  tieWithPrevious,
  type TieGroups,
} from "../src/ranking.js";

describe("competitionRanking", () => {
  it("ranks a plain order 1..n", () => {
    const groups: TieGroups = [["v3"], ["v1"], ["v2"], ["v4"]];
    expect(competitionRanking(groups)).toEqual({ v3: 1, v1: 2, v2: 3, v4: 4 });
  });

  it("shares the best applicable rank for ties and skips the next", () => {
    const groups: TieGroups = [["v1", "v2"], ["v3"], ["v4"]];
    expect(competitionRanking(groups)).toEqual({ v1: 1, v2: 1, v3: 3, v4: 4 });
  });

  it("handles a tie in the middle", () => {
    const groups: TieGroups = [["a"], ["b", "c"], ["d"]];
    expect(competitionRanking(groups)).toEqual({ a: 1, b: 2, c: 2, d: 4 });
  });

  it("is empty for no groups", () => {
    expect(competitionRanking([])).toEqual({});
  });
});

describe("interaction steps", () => {
  it("builds groups through rank-next and tie-with-previous", () => {
    let groups: TieGroups = [];
    groups = rankNext(groups, "b");
    groups = rankNext(groups, "a");
    groups = tieWithPrevious(groups, "c");
    groups = rankNext(groups, "d");
    expect(groups).toEqual([["b"], ["a", "c"], ["d"]]);
    expect(competitionRanking(groups)).toEqual({ b: 1, a: 2, c: 2, d: 4 });
  });

  it("ignores ranking an already ranked label", () => {
    let groups: TieGroups = rankNext([], "a");
    groups = rankNext(groups, "a");
    expect(groups).toEqual([["a"]]);
  });

  it("cannot tie before anything is ranked", () => {
    expect(tieWithPrevious([], "a")).toEqual([]);
  });

  it("tracks ranked labels", () => {
    const groups: TieGroups = [["a"], ["b", "c"]];
    expect(rankedLabels(groups)).toEqual(new Set(["a", "b", "c"]));
  });
});
