// DOM glue: wires the upload form, proposal buttons, manual composer, and
// export downloads to the API client. All state lives on the server; every
// mutation just swaps in the state the server returned.

import { WizardApi } from "./api.js";
import { exportFilename } from "./state.js";
import { renderError, renderLattice, renderSession } from "./render.js";
import { ApiError, NetworkError, SessionState } from "./types.js";

const api = new WizardApi(
  (window as { GENCONCEPT_API?: string }).GENCONCEPT_API ?? "",
);

let current: SessionState | null = null;
let lastAction: (() => Promise<void>) | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(err: unknown): void {
  const banner = el<HTMLDivElement>("errors");
  if (err instanceof NetworkError) {
    banner.innerHTML = renderError(`network failure: ${err.message}`, true);
    banner.querySelector(".retry")?.addEventListener("click", () => {
      banner.innerHTML = "";
      void lastAction?.();
    });
  } else if (err instanceof ApiError) {
    banner.innerHTML = renderError(err.message, false);
  } else {
    banner.innerHTML = renderError(String(err), false);
  }
}

async function perform(action: () => Promise<SessionState>): Promise<void> {
  const wrapped = async () => {
    try {
      current = await action();
      el("errors").innerHTML = "";
      paint();
    } catch (err) {
      showError(err);
    }
  };
  lastAction = wrapped;
  await wrapped();
}

function paint(): void {
  if (!current) return;
  const root = el<HTMLDivElement>("session");
  root.innerHTML = renderSession(current);
  const sid = current.id;

  root.querySelectorAll<HTMLButtonElement>("button.accept").forEach((button) => {
    button.addEventListener("click", () =>
      void perform(() => api.accept(sid, button.dataset.fp ?? "")),
    );
  });
  root.querySelectorAll<HTMLButtonElement>("button.reject").forEach((button) => {
    button.addEventListener("click", () =>
      void perform(() => api.reject(sid, button.dataset.fp ?? "")),
    );
  });

  el<HTMLFormElement>("manual-group").addEventListener("submit", (event) => {
    event.preventDefault();
    const form = event.currentTarget as HTMLFormElement;
    const name = (form.elements.namedItem("group-name") as HTMLInputElement).value;
    const members = [...form.querySelectorAll<HTMLInputElement>("input[name=member]:checked")]
      .map((box) => box.value);
    void perform(() => api.addGroup(sid, name, members));
  });

  el("export-cxt").addEventListener("click", () => void download("cxt"));
  el("export-json").addEventListener("click", () => void download("json"));
  el("show-before").addEventListener("click", () => void showLattice("before"));
  el("show-after").addEventListener("click", () => void showLattice("after"));
}

async function download(format: "cxt" | "json"): Promise<void> {
  if (!current) return;
  try {
    const text = await api.exportContext(current.id, format);
    const blob = new Blob([text], { type: "text/plain" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = exportFilename(current, format);
    link.click();
    URL.revokeObjectURL(link.href);
  } catch (err) {
    showError(err);
  }
}

async function showLattice(which: "before" | "after"): Promise<void> {
  if (!current) return;
  try {
    el("lattice-view").innerHTML = renderLattice(await api.lattice(current.id, which));
  } catch (err) {
    showError(err);
  }
}

function setup(): void {
  el<HTMLFormElement>("upload-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const file = el<HTMLInputElement>("context-file").files?.[0];
    const minsupp = el<HTMLInputElement>("minsupp").value;
    const mode = el<HTMLSelectElement>("mode").value as "exists" | "forall";
    if (!file) {
      showError(new ApiError(0, "choose a context file first"));
      return;
    }
    const format = file.name.endsWith(".csv") ? "csv" : "cxt";
    void file.text().then((data) =>
      perform(() => api.createSession(data, format, minsupp, mode)),
    );
  });
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  setup();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", setup);
}
