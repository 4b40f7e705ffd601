import { describe, expect, it } from "vitest"

import {
  DEFAULT_CONTROLS,
  HistoryTrail,
  RequestSequencer,
  encodeState,
  parseState,
} from "../src/state.js"

describe("parseState", () => {
  it("falls back to defaults for an empty search string", () => {
    const state = parseState("")
    expect(state.uri).toBeNull()
    expect(state.controls).toEqual(DEFAULT_CONTROLS)
    expect(state.query).toBe("")
    expect(state.hits).toEqual([])
  })

  it("reads uri, controls, and query from the URL", () => {
    const state = parseState(
      "?uri=http%3A%2F%2Fex%2FDaVinciCode&k=2&L=10&weighting=uniform&variant=simPrefixed&method=lattice&q=vinci",
    )
    expect(state.uri).toBe("http://ex/DaVinciCode")
    expect(state.controls).toEqual({
      k: 2,
      L: 10,
      weighting: "uniform",
      variant: "simPrefixed",
      method: "lattice",
    })
    expect(state.query).toBe("vinci")
  })

  it("clamps k and L into the service ranges", () => {
    expect(parseState("?k=99&L=99").controls).toMatchObject({ k: 5, L: 50 })
    expect(parseState("?k=0&L=0").controls).toMatchObject({ k: 1, L: 1 })
    expect(parseState("?k=-3").controls.k).toBe(1)
  })

  it("ignores unparseable or unknown values", () => {
    const state = parseState("?k=banana&weighting=cubic&variant=wat&method=magic")
    expect(state.controls).toEqual(DEFAULT_CONTROLS)
  })
})

describe("encodeState", () => {
  it("omits every default so the home URL stays clean", () => {
    const state = parseState("")
    expect(encodeState(state)).toBe("")
  })

  it("round-trips through parseState", () => {
    const original = parseState("?uri=http%3A%2F%2Fex%2FItaly&k=1&weighting=uniform&q=rome")
    const again = parseState(`?${encodeState(original)}`)
    expect(again.uri).toBe(original.uri)
    expect(again.controls).toEqual(original.controls)
    expect(again.query).toBe(original.query)
  })

  it("keeps only the non-default controls", () => {
    const state = parseState("?uri=http%3A%2F%2Fex%2FItaly&k=2")
    const encoded = encodeState(state)
    expect(encoded).toContain("k=2")
    expect(encoded).not.toContain("L=")
    expect(encoded).not.toContain("weighting=")
    expect(encoded).not.toContain("method=")
  })
})

describe("HistoryTrail", () => {
  it("records visits in order", () => {
    const trail = new HistoryTrail()
    expect(trail.push("http://ex/A")).toBe(true)
    expect(trail.push("http://ex/B")).toBe(true)
    expect(trail.all()).toEqual(["http://ex/A", "http://ex/B"])
    expect(trail.length).toBe(2)
  })

  it("drops consecutive duplicates but keeps round trips", () => {
    const trail = new HistoryTrail()
    trail.push("http://ex/A")
    expect(trail.push("http://ex/A")).toBe(false)
    trail.push("http://ex/B")
    trail.push("http://ex/A")
    expect(trail.all()).toEqual(["http://ex/A", "http://ex/B", "http://ex/A"])
  })
})

describe("RequestSequencer", () => {
  it("treats only the newest ticket as current", () => {
    const seq = new RequestSequencer()
    const first = seq.next()
    const second = seq.next()
    expect(seq.isCurrent(first)).toBe(false)
    expect(seq.isCurrent(second)).toBe(true)
    const third = seq.next()
    expect(seq.isCurrent(second)).toBe(false)
    expect(seq.isCurrent(third)).toBe(true)
  })
})
