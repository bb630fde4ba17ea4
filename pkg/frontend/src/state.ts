// Pure view-model helpers. The server state is authoritative; these only
// rearrange it for display (sorting, badges, deltas) without recomputing
// any support or count.

import { ItemRow, SessionState } from "./types.js";

export interface FractionParts {
  num: number;
  den: number;
}

export function parseFraction(text: string): FractionParts {
  const [rawNum, rawDen] = text.split("/");
  const num = Number(rawNum);
  const den = rawDen === undefined ? 1 : Number(rawDen);
  if (!Number.isFinite(num) || !Number.isFinite(den) || den === 0) {
    throw new Error(`not a fraction: ${text}`);
  }
  return { num, den };
}

export function compareFractions(a: string, b: string): number {
  const fa = parseFraction(a);
  const fb = parseFraction(b);
  return fa.num * fb.den - fb.num * fa.den; // exact for the sizes involved
}

/** Items sorted by support descending, names breaking ties. */
export function sortedItems(state: SessionState): ItemRow[] {
  return [...state.items].sort(
    (x, y) => compareFractions(y.support, x.support) || x.name.localeCompare(y.name),
  );
}

export interface SizeSummary {
  before: number | null;
  after: number | null;
  delta: number | null;
  increase: boolean;
  censored: boolean;
}

/** Size figures with the increase warning; "after" is the all-accepted view. */
export function sizeSummary(state: SessionState): SizeSummary {
  const before = state.size_before;
  const after = state.size_after_if_all_accepted;
  const censored = before === null || after === null;
  const delta = censored ? null : after - before;
  return {
    before,
    after,
    delta,
    increase: !censored && after > before,
    censored,
  };
}

/** Attributes still open for a manual group (not yet in an accepted group). */
export function manualGroupCandidates(state: SessionState): string[] {
  return state.items.filter((item) => !item.resolved).map((item) => item.name);
}

export function validateManualGroup(
  state: SessionState,
  name: string,
  members: string[],
): string | null {
  if (!name.trim()) return "group needs a name";
  if (members.length === 0) return "pick at least one member";
  const known = new Set(state.context.attributes);
  for (const member of members) {
    if (!known.has(member)) return `unknown attribute ${member}`;
  }
  const taken = new Set<string>([
    ...state.context.attributes,
    ...state.accepted.map((g) => g.name),
  ]);
  if (taken.has(name)) return `name ${name} is already in use`;
  // overlap with accepted groups is the server's 409; pre-flagging it here
  // just saves a round trip, the server still decides
  const resolved = new Set(
    state.items.filter((i) => i.resolved).map((i) => i.name),
  );
  for (const member of members) {
    if (resolved.has(member)) return `${member} is already grouped`;
  }
  return null;
}

export interface DecisionEntry {
  kind: "accept" | "reject";
  label: string;
}

/** Decision history reconstructed from the server state, newest last. */
export function decisionHistory(state: SessionState): DecisionEntry[] {
  const accepts: DecisionEntry[] = state.accepted.map((g) => ({
    kind: "accept",
    label: `${g.name} = {${g.members.join(", ")}}`,
  }));
  const rejects: DecisionEntry[] = state.rejected.map((fp) => ({
    kind: "reject",
    label: fp,
  }));
  return [...accepts, ...rejects];
}

export function exportFilename(state: SessionState, format: "cxt" | "json"): string {
  const base = state.context.name || "context";
  return `${base}-generalized.${format}`;
}
