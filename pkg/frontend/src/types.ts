// Mirrors of the service's JSON payloads. The server owns all state;
// these are read-only views.

export interface ItemRow {
  name: string;
  support: string; // exact "p/q"
  frequent: boolean;
  resolved: boolean;
}

export interface ProposalCard {
  fingerprint: string;
  name: string;
  members: string[];
  support: string;
  residual: boolean;
  status: string;
}

export interface AcceptedGroup {
  name: string;
  members: string[];
  fingerprint: string;
  support: string;
}

export interface SessionState {
  format_version: number;
  id: string;
  minsupp: string;
  mode: "exists" | "forall";
  context: { name: string; objects: string[]; attributes: string[] };
  items: ItemRow[];
  accepted: AcceptedGroup[];
  rejected: string[];
  proposals: ProposalCard[];
  size_before: number | null;
  size_after_accepted: number | null;
  size_after_if_all_accepted: number | null;
}

export interface LatticeView {
  format_version: number;
  which: "before" | "after";
  concepts: { extent: string[]; intent: string[] }[];
  covers: [number, number][];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class NetworkError extends Error {}
