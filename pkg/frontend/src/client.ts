// HTTP client for the service. Generation keeps at most one request in
// flight: starting a new one aborts its predecessor, and every response
// is checked against a monotone request id so a stale reply can never
// overwrite a newer one.

import type {
  GenerateRequestWire,
  GenerateResponseWire,
  ModelsResponseWire,
  TemplateResponseWire
} from './types.js'

export type GenerateOutcome =
  | { kind: 'ok'; requestId: number; response: GenerateResponseWire }
  | { kind: 'stale'; requestId: number }
  | { kind: 'error'; requestId: number; message: string }

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

const describeHttpError = async (response: Response): Promise<string> => {
  try {
    const body = (await response.json()) as { detail?: unknown }
    if (body.detail !== undefined) {
      return `${response.status}: ${typeof body.detail === 'string' ? body.detail : JSON.stringify(body.detail)}`
    }
  } catch {
    // fall through to the bare status line
  }
  return `${response.status} ${response.statusText}`
}

export class ServiceClient {
  private latestId = 0
  private inflight: AbortController | null = null

  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init)
  ) {}

  get busy(): boolean {
    return this.inflight !== null
  }

  async generate(request: GenerateRequestWire): Promise<GenerateOutcome> {
    this.inflight?.abort()
    const controller = new AbortController()
    this.inflight = controller
    const requestId = ++this.latestId
    try {
      const response = await this.fetchFn(`${this.baseUrl}/generate`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(request),
        signal: controller.signal
      })
      if (requestId !== this.latestId) return { kind: 'stale', requestId }
      if (!response.ok) {
        return { kind: 'error', requestId, message: await describeHttpError(response) }
      }
      const body = (await response.json()) as GenerateResponseWire
      if (requestId !== this.latestId) return { kind: 'stale', requestId }
      return { kind: 'ok', requestId, response: body }
    } catch (err) {
      if (requestId !== this.latestId || controller.signal.aborted) {
        return { kind: 'stale', requestId }
      }
      return { kind: 'error', requestId, message: err instanceof Error ? err.message : String(err) }
    } finally {
      if (this.inflight === controller) this.inflight = null
    }
  }

  async template(bars: number, profile: string, seed?: number): Promise<TemplateResponseWire> {
    const response = await this.fetchFn(`${this.baseUrl}/template`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(seed === undefined ? { bars, profile } : { bars, profile, seed })
    })
    if (!response.ok) throw new Error(await describeHttpError(response))
    return (await response.json()) as TemplateResponseWire
  }

  async models(): Promise<ModelsResponseWire> {
    const response = await this.fetchFn(`${this.baseUrl}/models`)
    if (!response.ok) throw new Error(await describeHttpError(response))
    return (await response.json()) as ModelsResponseWire
  }
}
