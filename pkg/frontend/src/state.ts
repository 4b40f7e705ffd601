// Browsing state, fully URL-encoded so every view is deep-linkable and
// the browser's back/forward restores both the entity and the controls.

import type { SearchHit } from "./api.js"

export interface Controls {
  k: number
  L: number
  weighting: string
  variant: string
  method: string
}

export interface BrowseState {
  uri: string | null
  controls: Controls
  query: string
  hits: SearchHit[]
}

export const K_RANGE: readonly [number, number] = [1, 5]
export const L_RANGE: readonly [number, number] = [1, 50]
export const WEIGHTINGS = ["uniform", "weighted"] as const
export const VARIANTS = ["sim", "simPrefixed", "simCombined"] as const
export const METHODS = ["exhaustive", "reversal", "lattice", "cache"] as const

export const DEFAULT_CONTROLS: Controls = {
  k: 3,
  L: 5,
  weighting: "weighted",
  variant: "sim",
  method: "reversal",
}

function clampInt(raw: string | null, fallback: number, lo: number, hi: number): number {
  const value = raw === null ? NaN : Number.parseInt(raw, 10)
  if (Number.isNaN(value)) return fallback
  return Math.min(hi, Math.max(lo, value))
}

function pick(raw: string | null, fallback: string, allowed: readonly string[]): string {
  return raw !== null && allowed.includes(raw) ? raw : fallback
}

/** Decode a location search string; anything invalid falls back to defaults. */
export function parseState(search: string): BrowseState {
  const params = new URLSearchParams(search)
  return {
    uri: params.get("uri"),
    controls: {
      k: clampInt(params.get("k"), DEFAULT_CONTROLS.k, ...K_RANGE),
      L: clampInt(params.get("L"), DEFAULT_CONTROLS.L, ...L_RANGE),
      weighting: pick(params.get("weighting"), DEFAULT_CONTROLS.weighting, WEIGHTINGS),
      variant: pick(params.get("variant"), DEFAULT_CONTROLS.variant, VARIANTS),
      method: pick(params.get("method"), DEFAULT_CONTROLS.method, METHODS),
    },
    query: params.get("q") ?? "",
    hits: [],
  }
}

/** Encode state back into a query string; defaults are omitted. */
export function encodeState(state: BrowseState): string {
  const params = new URLSearchParams()
  if (state.uri) params.set("uri", state.uri)
  const c = state.controls
  if (c.k !== DEFAULT_CONTROLS.k) params.set("k", String(c.k))
  if (c.L !== DEFAULT_CONTROLS.L) params.set("L", String(c.L))
  if (c.weighting !== DEFAULT_CONTROLS.weighting) params.set("weighting", c.weighting)
  if (c.variant !== DEFAULT_CONTROLS.variant) params.set("variant", c.variant)
  if (c.method !== DEFAULT_CONTROLS.method) params.set("method", c.method)
  if (state.query) params.set("q", state.query)
  return params.toString()
}

/** The visited-entity trail; pushing the current entity again is a no-op. */
export class HistoryTrail {
  private readonly entries: string[] = []

  push(uri: string): boolean {
    if (this.entries[this.entries.length - 1] === uri) return false
    this.entries.push(uri)
    return true
  }

  all(): readonly string[] {
    return this.entries
  }

  get length(): number {
    return this.entries.length
  }
}

/**
 * Tracks the newest request per panel so responses that were superseded
 * while in flight can be recognized and dropped.
 */
export class RequestSequencer {
  private counter = 0

  next(): number {
    this.counter += 1
    return this.counter
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.counter
  }
}
