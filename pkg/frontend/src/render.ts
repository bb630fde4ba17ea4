// HTML rendering as pure string functions so the view layer is testable
// without a browser. main.ts wires these into the DOM.

import {
  decisionHistory,
  manualGroupCandidates,
  sizeSummary,
  sortedItems,
} from "./state.js";
import { LatticeView, ProposalCard, SessionState } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderSizeBanner(state: SessionState): string {
  const sizes = sizeSummary(state);
  if (sizes.censored) {
    return `<div class="sizes censored">concept counts unavailable (over the ceiling)</div>`;
  }
  const warning = sizes.increase
    ? `<span class="warning">grouping INCREASES the lattice (+${sizes.delta})</span>`
    : `<span class="ok">${sizes.delta === 0 ? "no change" : `${sizes.delta}`} concepts</span>`;
  return (
    `<div class="sizes">before: <b>${sizes.before}</b> ` +
    `after (all accepted): <b>${sizes.after}</b> ${warning}</div>`
  );
}

export function renderItemTable(state: SessionState): string {
  const rows = sortedItems(state)
    .map((item) => {
      const badge = item.frequent
        ? `<span class="badge frequent">frequent</span>`
        : `<span class="badge infrequent">infrequent</span>`;
      const resolved = item.resolved ? ` <span class="badge grouped">grouped</span>` : "";
      return (
        `<tr><td>${escapeHtml(item.name)}</td>` +
        `<td class="support">${item.support}</td><td>${badge}${resolved}</td></tr>`
      );
    })
    .join("");
  return (
    `<table class="items"><thead><tr><th>item</th><th>support</th><th></th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderProposalCard(card: ProposalCard): string {
  const residual = card.residual
    ? `<span class="badge residual">below threshold</span>`
    : "";
  return (
    `<div class="proposal" data-fp="${card.fingerprint}">` +
    `<h4>${escapeHtml(card.name)}</h4>` +
    `<p>{${card.members.map(escapeHtml).join(", ")}} &middot; support ${card.support} ${residual}</p>` +
    `<button class="accept" data-fp="${card.fingerprint}">accept</button>` +
    `<button class="reject" data-fp="${card.fingerprint}">reject</button>` +
    `</div>`
  );
}

export function renderProposals(state: SessionState): string {
  if (state.proposals.length === 0) {
    return `<p class="empty">no open proposals</p>`;
  }
  return state.proposals.map(renderProposalCard).join("");
}

export function renderManualComposer(state: SessionState): string {
  const options = manualGroupCandidates(state)
    .map((name) => {
      const safe = escapeHtml(name);
      return `<label><input type="checkbox" name="member" value="${safe}"> ${safe}</label>`;
    })
    .join("");
  return (
    `<form id="manual-group">` +
    `<input name="group-name" placeholder="group name">` +
    `<div class="candidates">${options}</div>` +
    `<button type="submit">add group</button>` +
    `</form>`
  );
}

export function renderHistory(state: SessionState): string {
  const entries = decisionHistory(state)
    .map((e) => `<li class="${e.kind}">${e.kind}: ${escapeHtml(e.label)}</li>`)
    .join("");
  return `<ol class="history">${entries}</ol>`;
}

export function renderLattice(view: LatticeView): string {
  const rows = view.concepts
    .map(
      (c, i) =>
        `<li>#${i} ({${c.extent.map(escapeHtml).join(",")}}, ` +
        `{${c.intent.map(escapeHtml).join(",")}})</li>`,
    )
    .join("");
  return (
    `<details class="lattice"><summary>${view.which}: ` +
    `${view.concepts.length} concepts</summary><ul>${rows}</ul></details>`
  );
}

export function renderError(message: string, retryable: boolean): string {
  const retry = retryable ? `<button class="retry">retry</button>` : "";
  return `<div class="error-banner">${escapeHtml(message)} ${retry}</div>`;
}

export function renderSession(state: SessionState): string {
  return (
    renderSizeBanner(state) +
    `<section id="items"><h3>items</h3>${renderItemTable(state)}</section>` +
    `<section id="proposals"><h3>proposals</h3>${renderProposals(state)}</section>` +
    `<section id="composer"><h3>manual group</h3>${renderManualComposer(state)}</section>` +
    `<section id="history"><h3>decisions</h3>${renderHistory(state)}</section>` +
    `<section id="export">` +
    `<button id="export-cxt">download .cxt</button>` +
    `<button id="export-json">download .json</button>` +
    `<button id="show-before">lattice before</button>` +
    `<button id="show-after">lattice after</button>` +
    `</section>`
  );
}
