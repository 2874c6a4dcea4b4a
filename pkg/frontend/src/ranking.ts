/** Ranking state: an ordered list of tie groups of item labels.
 *
 * The respondent ranks items one by one; "tie with previous" drops an item
 * into the last group instead of opening a new one. Competition ranks
 * follow from the group sizes: a group's rank is 1 plus the number of
 * items in all better groups, so ties share a rank and the next rank is
 * skipped ([A], [B, C], [D] -> A:1, B:2, C:2, D:4).
 */

export type TieGroups = string[][];

export function competitionRanking(groups: TieGroups): Record<string, number> {
  const ranks: Record<string, number> = {};
  let better = 0;
  for (const group of groups) {
    for (const label of group) {
      ranks[label] = better + 1;
    }
    better += group.length;
  }
  return ranks;
}

export function rankedLabels(groups: TieGroups): Set<string> {
  return new Set(groups.flat());
}

export function rankNext(groups: TieGroups, label: string): TieGroups {
  if (rankedLabels(groups).has(label)) {
    return groups;
  }
  return [...groups, [label]];
}

export function tieWithPrevious(groups: TieGroups, label: string): TieGroups {
  if (groups.length === 0 || rankedLabels(groups).has(label)) {
    return groups;
  }
  const head = groups.slice(0, -1);
  const last = groups[groups.length - 1] ?? [];
  return [...head, [...last, label]];
}
