// HTML-string templates. Pure functions of service responses plus the
// browse state; no DOM reads, no similarity math of its own.

import type {
  EntityPage,
  ErrorBody,
  RenderedValue,
  SearchResponse,
  SimilarEntry,
  SimilarResponse,
} from "./api.js"
import { encodeState, type BrowseState } from "./state.js"

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
}

function shortName(uri: string): string {
  const cut = Math.max(uri.lastIndexOf("/"), uri.lastIndexOf("#"))
  return cut >= 0 ? uri.slice(cut + 1) || uri : uri
}

/** An in-app navigation link that keeps the current controls in the URL. */
export function entityLink(uri: string, state: BrowseState, text?: string): string {
  const target = encodeState({ ...state, uri, query: "", hits: [] })
  const shown = escapeHtml(text ?? shortName(uri))
  return `<a href="?${target}" data-uri="${escapeHtml(uri)}" title="${escapeHtml(uri)}">${shown}</a>`
}

function renderValue(value: RenderedValue, state: BrowseState): string {
  if (value.kind === "literal") {
    const tag = value.language
      ? `<span class="tag">@${escapeHtml(value.language)}</span>`
      : value.datatype
        ? `<span class="tag">${escapeHtml(shortName(value.datatype))}</span>`
        : ""
    return `<span class="literal">"${escapeHtml(value.text)}"</span>${tag}`
  }
  return entityLink(value.uri ?? value.text, state, value.label ?? undefined)
}

function renderScoreBar(score: number): string {
  const pct = Math.round(Math.min(1, Math.max(0, score)) * 100)
  return (
    `<span class="bar" role="img" aria-label="score ${score}">` +
    `<span class="bar-fill" style="width:${pct}%"></span></span>`
  )
}

function renderSharedNodes(entry: SimilarEntry, state: BrowseState): string {
  if (entry.sharedNodes.length === 0) {
    return `<p class="empty">No shared nodes within this radius.</p>`
  }
  const rows = entry.sharedNodes
    .map((node) => {
      const name = node.uri
        ? entityLink(node.uri, state)
        : `<span class="literal">${escapeHtml(node.text)}</span>`
      return (
        `<tr><td>${name}</td><td>${node.distA}</td>` +
        `<td>${node.distB}</td><td>${node.weight}</td></tr>`
      )
    })
    .join("")
  return (
    `<table class="shared"><thead><tr>` +
    `<th>shared node</th><th>d(A)</th><th>d(B)</th><th>weight</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  )
}

function renderSimilarEntry(entry: SimilarEntry, state: BrowseState): string {
  return (
    `<li class="similar-entry" data-score="${entry.score}">` +
    `<div class="entry-head">${entityLink(entry.uri, state, entry.label ?? undefined)}` +
    `${renderScoreBar(entry.score)}<span class="score">${entry.score.toFixed(4)}</span></div>` +
    `<details><summary>why: ${entry.numerator}/${entry.denominator} ` +
    `(${entry.intersectionSize} of ${entry.unionSize} nodes shared)</summary>` +
    renderSharedNodes(entry, state) +
    `</details></li>`
  )
}

export function renderSimilarPanel(similar: SimilarResponse, state: BrowseState): string {
  const body =
    similar.entries.length === 0
      ? `<p class="empty">No entities with nonzero similarity at k=${similar.k}.</p>`
      : `<ol class="similar-list">${similar.entries
          .map((entry) => renderSimilarEntry(entry, state))
          .join("")}</ol>`
  return (
    `<h2>Similar entities</h2>` +
    `<p class="meta">k=${similar.k}, L=${similar.L}, ${escapeHtml(similar.weighting)}, ` +
    `${escapeHtml(similar.variant)}, ${similar.elapsedMs} ms</p>` +
    body
  )
}

export function renderControls(state: BrowseState, error?: ErrorBody): string {
  const c = state.controls
  const option = (value: string, current: string) =>
    `<option value="${value}"${value === current ? " selected" : ""}>${value}</option>`
  const inline =
    error && error.param
      ? `<span class="control-error" data-param="${escapeHtml(error.param)}">${escapeHtml(error.detail)}</span>`
      : ""
  return (
    `<form id="controls">` +
    `<label>k <input name="k" type="number" min="1" max="5" value="${c.k}"></label>` +
    `<label>L <input name="L" type="number" min="1" max="50" value="${c.L}"></label>` +
    `<label>weighting <select name="weighting">` +
    ["uniform", "weighted"].map((w) => option(w, c.weighting)).join("") +
    `</select></label>` +
    `<label>variant <select name="variant">` +
    ["sim", "simPrefixed", "simCombined"].map((v) => option(v, c.variant)).join("") +
    `</select></label>` +
    `<label>method <select name="method">` +
    ["exhaustive", "reversal", "lattice", "cache"].map((m) => option(m, c.method)).join("") +
    `</select></label>` +
    `${inline}</form>`
  )
}

export function renderEntityView(page: EntityPage, state: BrowseState): string {
  const title = page.label ?? shortName(page.uri)
  const types =
    page.types.length === 0
      ? ""
      : `<p class="types">${page.types.map((t) => entityLink(t, state)).join(" ")}</p>`
  const outgoing = page.outgoing
    .map(
      (group) =>
        `<tr><th>${escapeHtml(shortName(group.property))}</th><td>` +
        group.values.map((value) => renderValue(value, state)).join(", ") +
        `</td></tr>`,
    )
    .join("")
  const incoming = page.incoming
    .map(
      (group) =>
        `<tr><th>&larr; ${escapeHtml(shortName(group.property))}</th><td>` +
        group.subjects.map((subject) => entityLink(subject, state)).join(", ") +
        `</td></tr>`,
    )
    .join("")
  return (
    `<article class="entity">` +
    `<h1>${escapeHtml(title)}</h1>` +
    `<p class="uri">${escapeHtml(page.uri)}</p>` +
    types +
    `<table class="properties"><tbody>${outgoing}${incoming}</tbody></table>` +
    `<p class="meta">${page.counts.outgoing} outgoing, ${page.counts.incoming} incoming, ` +
    `${page.counts.types} type(s)</p>` +
    `</article>`
  )
}

export function renderSearchResults(results: SearchResponse, state: BrowseState): string {
  if (results.hits.length === 0) {
    return `<p class="empty">No literals match "${escapeHtml(results.q)}".</p>`
  }
  const rows = results.hits
    .map(
      (hit) =>
        `<li>${entityLink(hit.uri, state, hit.label ?? undefined)}` +
        `<span class="meta">${hit.matches} token(s)</span></li>`,
    )
    .join("")
  return `<ul class="hits">${rows}</ul>`
}

export function renderErrorBanner(body: ErrorBody): string {
  return (
    `<div class="banner error" role="alert">` +
    `<strong>${escapeHtml(body.error)}</strong> ${escapeHtml(body.detail)} ` +
    `<button type="button" data-retry>Retry</button></div>`
  )
}

export function renderNotFound(uri: string): string {
  return (
    `<div class="banner warn"><strong>Not found</strong> ` +
    `No entity <code>${escapeHtml(uri)}</code> in this knowledge base.</div>`
  )
}

export function renderHome(): string {
  return (
    `<div class="home"><h1>lodsim</h1>` +
    `<p>Search the knowledge base, or open an entity to browse by similarity.</p></div>`
  )
}

export function renderLoading(): string {
  return `<p class="loading">Loading&hellip;</p>`
}
