import { afterEach, describe, expect, it, vi } from "vitest"

import { ApiClient, ApiError } from "../src/api.js"
import { DEFAULT_CONTROLS } from "../src/state.js"

type FakeResponse = { ok: boolean; status: number; json: () => Promise<unknown> }

function respond(status: number, payload: unknown): FakeResponse {
  return { ok: status >= 200 && status < 300, status, json: async () => payload }
}

function respondNoBody(status: number): FakeResponse {
  return {
    ok: false,
    status,
    json: async () => {
      throw new SyntaxError("not json")
    },
  }
}

afterEach(() => {
  vi.unstubAllGlobals()
})

describe("ApiClient", () => {
  it("builds request URLs from the base URL and encodes parameters", async () => {
    const fetchMock = vi.fn(async () => respond(200, { entries: [] }))
    vi.stubGlobal("fetch", fetchMock)
    const client = new ApiClient("http://svc:8080")
    await client.similar("http://ex/A", DEFAULT_CONTROLS)
    const called = new URL(fetchMock.mock.calls[0]?.[0] as string)
    expect(called.origin).toBe("http://svc:8080")
    expect(called.pathname).toBe("/api/similar")
    expect(called.searchParams.get("uri")).toBe("http://ex/A")
    expect(called.searchParams.get("k")).toBe("3")
    expect(called.searchParams.get("L")).toBe("5")
    expect(called.searchParams.get("method")).toBe("reversal")
  })

  it("returns the parsed payload on success", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => respond(200, { triples: 79 })))
    const stats = await new ApiClient().stats()
    expect(stats.triples).toBe(79)
  })

  it("search passes the query and a default limit", async () => {
    const fetchMock = vi.fn(async () => respond(200, { q: "x", hits: [] }))
    vi.stubGlobal("fetch", fetchMock)
    await new ApiClient().search("da vinci")
    const called = new URL(fetchMock.mock.calls[0]?.[0] as string, "http://local")
    expect(called.searchParams.get("q")).toBe("da vinci")
    expect(called.searchParams.get("limit")).toBe("10")
  })

  it("surfaces the service error envelope on non-2xx", async () => {
    const body = { error: "not_found", detail: "no entity http://ex/Ghost", param: "uri" }
    vi.stubGlobal("fetch", vi.fn(async () => respond(404, body)))
    const err = await new ApiClient()
      .entity("http://ex/Ghost")
      .then(() => null)
      .catch((e: unknown) => e)
    expect(err).toBeInstanceOf(ApiError)
    expect((err as ApiError).status).toBe(404)
    expect((err as ApiError).body).toEqual(body)
  })

  it("falls back to a generic envelope when the error body is not JSON", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => respondNoBody(503)))
    const err = await new ApiClient()
      .stats()
      .then(() => null)
      .catch((e: unknown) => e)
    expect(err).toBeInstanceOf(ApiError)
    expect((err as ApiError).body).toEqual({ error: "http_error", detail: "HTTP 503" })
  })

  it("maps network failures to an unreachable error with status 0", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => {
        throw new TypeError("fetch failed")
      }),
    )
    const err = await new ApiClient("http://down:1")
      .stats()
      .then(() => null)
      .catch((e: unknown) => e)
    expect(err).toBeInstanceOf(ApiError)
    expect((err as ApiError).status).toBe(0)
    expect((err as ApiError).body.error).toBe("unreachable")
    expect((err as ApiError).body.detail).toContain("fetch failed")
  })
})
