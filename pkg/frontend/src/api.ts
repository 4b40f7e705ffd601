// Typed client for the lodsim HTTP JSON API. Every number the UI shows
// comes from these response shapes; nothing is computed client-side.

export interface Stats {
  triples: number
  entities: number
  classes: number
  properties: number
  literals: number
  cacheLoaded: boolean
}

export interface RenderedValue {
  kind: "iri" | "bnode" | "literal"
  text: string
  uri?: string
  label?: string
  language?: string
  datatype?: string
}

export interface OutgoingGroup {
  property: string
  values: RenderedValue[]
}

export interface IncomingGroup {
  property: string
  subjects: string[]
}

export interface EntityPage {
  uri: string
  label: string | null
  types: string[]
  outgoing: OutgoingGroup[]
  incoming: IncomingGroup[]
  counts: { outgoing: number; incoming: number; types: number }
}

export interface SharedNode {
  text: string
  distA: number
  distB: number
  weight: number
  uri?: string
}

export interface SimilarEntry {
  uri: string
  score: number
  numerator: number
  denominator: number
  intersectionSize: number
  unionSize: number
  sharedNodes: SharedNode[]
  label?: string
}

export interface SimilarResponse {
  uri: string
  k: number
  L: number
  weighting: string
  variant: string
  entries: SimilarEntry[]
  elapsedMs: number
}

export interface SearchHit {
  uri: string
  matches: number
  label?: string
}

export interface SearchResponse {
  q: string
  hits: SearchHit[]
}

export interface ErrorBody {
  error: string
  detail: string
  param?: string
}

/** A non-2xx response, carrying the service's error envelope. */
export class ApiError extends Error {
  readonly status: number
  readonly body: ErrorBody

  constructor(status: number, body: ErrorBody) {
    super(body.detail)
    this.status = status
    this.body = body
  }
}

async function getJson<T>(url: string): Promise<T> {
  let response: Response
  try {
    response = await fetch(url, { headers: { Accept: "application/json" } })
  } catch (cause) {
    throw new ApiError(0, {
      error: "unreachable",
      detail: `service unreachable: ${String(cause)}`,
    })
  }
  let payload: unknown = null
  try {
    payload = await response.json()
  } catch {
    // fall through; a non-JSON body still reports its HTTP status
  }
  if (!response.ok) {
    const body =
      payload && typeof payload === "object" && "error" in (payload as object)
        ? (payload as ErrorBody)
        : { error: "http_error", detail: `HTTP ${response.status}` }
    throw new ApiError(response.status, body)
  }
  return payload as T
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string, params: Record<string, string | number>): string {
    const search = new URLSearchParams()
    for (const [key, value] of Object.entries(params)) {
      search.set(key, String(value))
    }
    const query = search.toString()
    return query ? `${this.baseUrl}${path}?${query}` : `${this.baseUrl}${path}`
  }

  stats(): Promise<Stats> {
    return getJson(this.url("/api/stats", {}))
  }

  entity(uri: string): Promise<EntityPage> {
    return getJson(this.url("/api/entity", { uri }))
  }

  similar(
    uri: string,
    controls: { k: number; L: number; weighting: string; variant: string; method: string },
  ): Promise<SimilarResponse> {
    return getJson(this.url("/api/similar", { uri, ...controls }))
  }

  search(q: string, limit = 10): Promise<SearchResponse> {
    return getJson(this.url("/api/search", { q, limit }))
  }
}
