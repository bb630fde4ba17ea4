// Thin typed client for the wizard service. Every call returns the fresh
// server state; nothing is cached here.

import { ApiError, LatticeView, NetworkError, SessionState } from "./types.js";

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new NetworkError(err instanceof Error ? err.message : String(err));
  }
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  if (response.status === 204) return undefined as T;
  return (await response.json()) as T;
}

export class WizardApi {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  createSession(
    data: string,
    format: "cxt" | "csv",
    minsupp: string,
    mode: "exists" | "forall",
  ): Promise<SessionState> {
    return request(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ context: { format, data }, minsupp, mode }),
    });
  }

  getSession(id: string): Promise<SessionState> {
    return request(this.url(`/sessions/${id}`));
  }

  accept(id: string, fingerprint: string): Promise<SessionState> {
    return request(this.url(`/sessions/${id}/proposals/${fingerprint}/accept`), {
      method: "POST",
    });
  }

  reject(id: string, fingerprint: string): Promise<SessionState> {
    return request(this.url(`/sessions/${id}/proposals/${fingerprint}/reject`), {
      method: "POST",
    });
  }

  addGroup(id: string, name: string, members: string[]): Promise<SessionState> {
    return request(this.url(`/sessions/${id}/groups`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ name, members }),
    });
  }

  async exportContext(id: string, format: "cxt" | "json"): Promise<string> {
    let response: Response;
    try {
      response = await fetch(this.url(`/sessions/${id}/export?format=${format}`));
    } catch (err) {
      throw new NetworkError(err instanceof Error ? err.message : String(err));
    }
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return response.text();
  }

  lattice(id: string, which: "before" | "after"): Promise<LatticeView> {
    return request(this.url(`/sessions/${id}/lattice?which=${which}`));
  }

  deleteSession(id: string): Promise<void> {
    return request(this.url(`/sessions/${id}`), { method: "DELETE" });
  }
}
