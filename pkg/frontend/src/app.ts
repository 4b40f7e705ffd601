// Application controller: owns the browse state, talks to the service,
// and re-renders. All navigation goes through the URL so views deep-link.

import {
  ApiError,
  type EntityPage,
  type ErrorBody,
  type SearchResponse,
  type SimilarResponse,
} from "./api.js"
import {
  encodeState,
  parseState,
  HistoryTrail,
  RequestSequencer,
  type BrowseState,
  type Controls,
} from "./state.js"
import {
  escapeHtml,
  renderControls,
  renderEntityView,
  renderErrorBanner,
  renderHome,
  renderLoading,
  renderNotFound,
  renderSearchResults,
  renderSimilarPanel,
} from "./render.js"

/** The slice of ApiClient the app needs; tests substitute stubs. */
export interface ServiceClient {
  entity(uri: string): Promise<EntityPage>
  similar(uri: string, controls: Controls): Promise<SimilarResponse>
  search(q: string, limit?: number): Promise<SearchResponse>
}

interface Failure {
  status: number
  body: ErrorBody
}

function toFailure(err: unknown): Failure {
  if (err instanceof ApiError) return { status: err.status, body: err.body }
  return { status: 0, body: { error: "unreachable", detail: String(err) } }
}

export class App {
  state: BrowseState
  readonly trail = new HistoryTrail()
  private readonly sequencer = new RequestSequencer()

  private page: EntityPage | null = null
  private pageError: Failure | null = null
  private similar: SimilarResponse | null = null
  private similarError: Failure | null = null
  private similarLoading = false
  private lastOp: Promise<void> = Promise.resolve()

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ServiceClient,
    private readonly win: Window = window,
  ) {
    this.state = parseState(this.win.location.search)
  }

  start(): Promise<void> {
    this.root.addEventListener("click", (ev) => this.onClick(ev))
    this.root.addEventListener("submit", (ev) => this.onSubmit(ev))
    this.root.addEventListener("change", (ev) => this.onChange(ev))
    this.root.addEventListener("input", (ev) => this.onInput(ev))
    this.win.addEventListener("popstate", () => {
      this.state = parseState(this.win.location.search)
      this.lastOp = this.restore()
    })
    this.lastOp = this.restore()
    return this.lastOp
  }

  /** Resolves once the most recent navigation or fetch has settled. */
  async whenIdle(): Promise<void> {
    let seen: Promise<void>
    do {
      seen = this.lastOp
      await seen
    } while (seen !== this.lastOp)
  }

  navigate(uri: string): Promise<void> {
    this.state = { ...this.state, uri, query: "", hits: [] }
    this.pushUrl()
    this.lastOp = this.restore()
    return this.lastOp
  }

  applyControls(controls: Controls): Promise<void> {
    this.state = { ...this.state, controls }
    this.pushUrl()
    this.lastOp = this.loadSimilar()
    return this.lastOp
  }

  runSearch(q: string): Promise<void> {
    this.state = { ...this.state, uri: null, query: q, hits: [] }
    this.page = null
    this.pageError = null
    this.similar = null
    this.similarError = null
    this.pushUrl()
    this.lastOp = this.loadSearch()
    return this.lastOp
  }

  private pushUrl(): void {
    const encoded = encodeState(this.state)
    this.win.history.pushState(null, "", encoded ? `?${encoded}` : this.win.location.pathname)
  }

  /** Bring the view in line with this.state without touching history. */
  private async restore(): Promise<void> {
    this.page = null
    this.pageError = null
    this.similar = null
    this.similarError = null
    if (this.state.uri) {
      this.trail.push(this.state.uri)
      await this.loadEntity()
    } else if (this.state.query) {
      await this.loadSearch()
    } else {
      this.render()
    }
  }

  private async loadEntity(): Promise<void> {
    const uri = this.state.uri
    if (!uri) return
    this.render()
    try {
      this.page = await this.client.entity(uri)
      this.pageError = null
    } catch (err) {
      this.page = null
      this.pageError = toFailure(err)
    }
    this.render()
    if (this.page !== null) {
      await this.loadSimilar()
    }
  }

  private async loadSimilar(): Promise<void> {
    const uri = this.state.uri
    if (!uri) return
    const ticket = this.sequencer.next()
    this.similarLoading = true
    this.render()
    let outcome: { ok: SimilarResponse } | { err: Failure }
    try {
      outcome = { ok: await this.client.similar(uri, this.state.controls) }
    } catch (err) {
      outcome = { err: toFailure(err) }
    }
    if (!this.sequencer.isCurrent(ticket)) return
    if ("ok" in outcome) {
      this.similar = outcome.ok
      this.similarError = null
    } else {
      this.similar = null
      this.similarError = outcome.err
    }
    this.similarLoading = false
    this.render()
  }

  private async loadSearch(): Promise<void> {
    this.render()
    try {
      const response = await this.client.search(this.state.query)
      this.state = { ...this.state, hits: response.hits }
      this.pageError = null
    } catch (err) {
      this.pageError = toFailure(err)
    }
    this.render()
  }

  private onClick(ev: Event): void {
    const target = ev.target as HTMLElement | null
    if (!target) return
    const link = target.closest("a[data-uri]")
    if (link) {
      ev.preventDefault()
      this.navigate(link.getAttribute("data-uri") ?? "")
      return
    }
    if (target.closest("a[data-home]")) {
      ev.preventDefault()
      this.state = { ...this.state, uri: null, query: "", hits: [] }
      this.pushUrl()
      this.lastOp = this.restore()
      return
    }
    const retry = target.closest("button[data-retry]")
    if (retry) {
      this.lastOp = retry.closest("#similar-area") ? this.loadSimilar() : this.restore()
    }
  }

  private onSubmit(ev: Event): void {
    const form = (ev.target as HTMLElement | null)?.closest("form#search")
    if (!form) return
    ev.preventDefault()
    const input = form.querySelector<HTMLInputElement>("input[name=q]")
    const q = input ? input.value.trim() : ""
    if (q) this.runSearch(q)
  }

  private onChange(ev: Event): void {
    const form = (ev.target as HTMLElement | null)?.closest("form#controls")
    if (!(form instanceof HTMLFormElement)) return
    const data = new FormData(form)
    const params = new URLSearchParams()
    for (const key of ["k", "L", "weighting", "variant", "method"]) {
      const value = data.get(key)
      if (typeof value === "string") params.set(key, value)
    }
    this.applyControls(parseState(`?${params.toString()}`).controls)
  }

  private onInput(ev: Event): void {
    const input = ev.target as HTMLInputElement | null
    if (!input || input.name !== "q" || !input.closest("form#search")) return
    const button = input.closest("form")?.querySelector("button[type=submit]")
    if (button instanceof HTMLButtonElement) {
      button.disabled = input.value.trim() === ""
    }
  }

  private render(): void {
    const searchDisabled = this.state.query.trim() === "" ? " disabled" : ""
    const header =
      `<header class="topbar"><a href="?" data-home>lodsim</a>` +
      `<form id="search" role="search">` +
      `<input name="q" type="search" placeholder="search literals" ` +
      `value="${escapeHtml(this.state.query)}">` +
      `<button type="submit"${searchDisabled}>Search</button></form></header>`

    let content: string
    if (this.pageError) {
      content =
        this.pageError.status === 404 && this.state.uri
          ? renderNotFound(this.state.uri)
          : renderErrorBanner(this.pageError.body)
    } else if (this.page) {
      content = renderEntityView(this.page, this.state)
    } else if (this.state.uri) {
      content = renderLoading()
    } else if (this.state.query) {
      content = renderSearchResults({ q: this.state.query, hits: this.state.hits }, this.state)
    } else {
      content = renderHome()
    }

    let similarArea = ""
    if (this.page) {
      const inline =
        this.similarError && this.similarError.body.param ? this.similarError.body : undefined
      let panel: string
      if (this.similarLoading) {
        panel = renderLoading()
      } else if (this.similarError) {
        panel = renderErrorBanner(this.similarError.body)
      } else if (this.similar) {
        panel = renderSimilarPanel(this.similar, this.state)
      } else {
        panel = ""
      }
      similarArea =
        `<aside id="similar-area">${renderControls(this.state, inline)}${panel}</aside>`
    }

    this.root.innerHTML = `${header}<main id="content">${content}</main>${similarArea}`
  }
}
