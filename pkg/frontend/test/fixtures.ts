import { SessionState } from "../src/types.js";

export function sampleState(overrides: Partial<SessionState> = {}): SessionState {
  return {
    format_version: 1,
    id: "abc123",
    minsupp: "3/5",
    mode: "exists",
    context: {
      name: "smallcxt",
      objects: ["g1", "g2", "g3", "g4", "g5"],
      attributes: ["m1", "m2", "m3", "m4", "m5", "m6"],
    },
    items: [
      { name: "m1", support: "2/5", frequent: false, resolved: false },
      { name: "m2", support: "2/5", frequent: false, resolved: false },
      { name: "m3", support: "3/5", frequent: true, resolved: false },
      { name: "m4", support: "3/5", frequent: true, resolved: false },
      { name: "m5", support: "5/5", frequent: true, resolved: false },
      { name: "m6", support: "2/5", frequent: false, resolved: false },
    ],
    accepted: [],
    rejected: [],
    proposals: [
      {
        fingerprint: "f1",
        name: "m12",
        members: ["m1", "m2"],
        support: "3/5",
        residual: false,
        status: "pending",
      },
      {
        fingerprint: "f2",
        name: "m6'",
        members: ["m6"],
        support: "2/5",
        residual: true,
        status: "pending",
      },
    ],
    size_before: 7,
    size_after_accepted: 7,
    size_after_if_all_accepted: 8,
    ...overrides,
  };
}
