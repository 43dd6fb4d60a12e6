// @vitest-environment happy-dom
import { beforeEach, describe, expect, it } from 'vitest'

import { createApp, type App } from '../src/app.js'
import { ServiceClient } from '../src/client.js'
import { chordDisplayLabel } from '../src/theory.js'
import type { ConditionCellWire, GenerateRequestWire, GenerateResponseWire } from '../src/types.js'
import { fakeAudio, jsonResponse, makeCondition, makeModels, makeResponse } from './fixtures.js'

// ---- a fully mocked service -------------------------------------------------

type MockService = {
  client: ServiceClient
  requests: GenerateRequestWire[]
  responses: GenerateResponseWire[]
  failNextGenerate: (detail: string) => void
}

const mockService = (): MockService => {
  const requests: GenerateRequestWire[] = []
  const responses: GenerateResponseWire[] = []
  let failure: string | null = null

  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    if (input.endsWith('/models')) return jsonResponse(makeModels())
    if (input.endsWith('/template')) {
      const body = JSON.parse(String(init?.body)) as { bars: number; profile: string }
      const conditions: ConditionCellWire[] = Array.from({ length: body.bars }, (_, i) =>
        makeCondition({
          grouping: i === 0 ? 'first1' : i === body.bars - 1 ? 'last1' : 'mid',
          valence: i < body.bars / 2 ? 'moderate_high' : 'moderate_low',
          density: 'high'
        })
      )
      return jsonResponse({ schema_version: 1, profile: body.profile, conditions })
    }
    if (input.endsWith('/generate')) {
      const body = JSON.parse(String(init?.body)) as GenerateRequestWire
      requests.push(body)
      if (failure !== null) {
        const detail = failure
        failure = null
        return jsonResponse({ detail }, 500)
      }
      const payload = makeResponse(body.conditions, { seed: body.seed, model: body.model })
      responses.push(payload)
      return jsonResponse(payload)
    }
    throw new Error(`unexpected url: ${input}`)
  }

  return {
    client: new ServiceClient('http://svc', fetchFn),
    requests,
    responses,
    failNextGenerate: (detail) => {
      failure = detail
    }
  }
}

// ---- dom helpers -------------------------------------------------------------

const q = <T extends Element>(root: HTMLElement, selector: string): T => {
  const found = root.querySelector(selector)
  if (found === null) throw new Error(`missing element: ${selector}`)
  return found as T
}

const valenceCell = (root: HTMLElement, bar: number): HTMLElement =>
  q(root, `td.cell-valence[data-bar="${bar}"]`)

const setInput = (root: HTMLElement, selector: string, value: string): void => {
  const input = q<HTMLInputElement | HTMLSelectElement>(root, selector)
  input.value = value
  input.dispatchEvent(new Event('change', { bubbles: true }))
}

const paint = (root: HTMLElement, brush: string, from: number, to: number): void => {
  q<HTMLSelectElement>(root, '#brush').value = brush
  valenceCell(root, from).dispatchEvent(new MouseEvent('mousedown', { bubbles: true, cancelable: true }))
  const step = from <= to ? 1 : -1
  for (let bar = from + step; step > 0 ? bar <= to : bar >= to; bar += step) {
    valenceCell(root, bar).dispatchEvent(new Event('mouseenter'))
  }
  document.dispatchEvent(new MouseEvent('mouseup', { bubbles: true }))
}

const mount = async (service: MockService): Promise<{ root: HTMLElement; app: App }> => {
  document.body.innerHTML = ''
  const root = document.createElement('div')
  document.body.append(root)
  const audio = fakeAudio()
  const app = createApp(root, service.client, { contextFactory: () => audio.context })
  await app.pending()
  return { root, app }
}

beforeEach(() => {
  document.body.innerHTML = ''
})

// ---- tests -------------------------------------------------------------------

describe('bootstrap', () => {
  it('loads models and profiles from the service and picks the first model', async () => {
    const service = mockService()
    const { root, app } = await mount(service)

    const options = Array.from(q<HTMLSelectElement>(root, '#model').options, (o) => o.value)
    expect(options).toEqual(['desk-transformer', 'desk-lstm'])
    const profiles = Array.from(q<HTMLSelectElement>(root, '#profile').options, (o) => o.value)
    expect(profiles).toEqual(['default', 'arc'])
    expect(app.grid().model).toBe('desk-transformer')
    expect(q<HTMLButtonElement>(root, '#generate').disabled).toBe(false)
    expect(root.querySelectorAll('td.cell-valence')).toHaveLength(8)
  })

  it('shows a toast when the service is unreachable', async () => {
    const client = new ServiceClient('http://down', async () => {
      throw new Error('connection refused')
    })
    document.body.innerHTML = ''
    const root = document.createElement('div')
    document.body.append(root)
    const app = createApp(root, client)
    await app.pending()

    const toast = q<HTMLElement>(root, '#toast')
    expect(toast.hidden).toBe(false)
    expect(q<HTMLElement>(root, '#toast-message').textContent).toContain('connection refused')
  })
})

describe('grid editing through the controls', () => {
  it('paints a valence curve by dragging across cells', async () => {
    const { root, app } = await mount(mockService())

    paint(root, 'high', 0, 3)
    paint(root, 'low', 7, 4) // drag right-to-left also paints
    expect(app.grid().cells.map((c) => c.valence)).toEqual([
      'high', 'high', 'high', 'high', 'low', 'low', 'low', 'low'
    ])
    expect(valenceCell(root, 0).dataset.valence).toBe('high')
    expect(valenceCell(root, 7).dataset.valence).toBe('low')

    // after mouseup the drag is over: hovering must not keep painting
    valenceCell(root, 2).dispatchEvent(new Event('mouseenter'))
    expect(app.grid().cells[2]?.valence).toBe('high')
  })

  it('resizes from the bar-count input, regrouping and dropping trailing cells', async () => {
    const { root, app } = await mount(mockService())

    paint(root, 'high', 0, 7)
    setInput(root, '#bars', '4')
    expect(app.grid().cells).toHaveLength(4)
    expect(app.grid().cells.map((c) => c.grouping)).toEqual(['first1', 'first2', 'last2', 'last1'])
    expect(app.grid().cells.every((c) => c.valence === 'high')).toBe(true)
    expect(root.querySelectorAll('td.cell-valence')).toHaveLength(4)

    setInput(root, '#bars', '8')
    expect(app.grid().cells[7]?.valence).toBe('neutral')
  })

  it('blocks submission for an out-of-range bar count without sending anything', async () => {
    const service = mockService()
    const { root, app } = await mount(service)

    setInput(root, '#bars', '40')
    expect(q<HTMLButtonElement>(root, '#generate').disabled).toBe(true)
    expect(q<HTMLElement>(root, '#problems').textContent).toContain('bar count must be 1..32')

    q<HTMLButtonElement>(root, '#generate').click()
    await app.pending()
    expect(service.requests).toHaveLength(0)
  })

  it('keeps one meter for the whole grid', async () => {
    const { root, app } = await mount(mockService())
    setInput(root, '#meter', '3/4')
    expect(app.grid().cells.every((c) => c.timeSignature === '3/4')).toBe(true)
  })

  it('fills the grid from a service template', async () => {
    const { root, app } = await mount(mockService())

    setInput(root, '#profile', 'arc')
    q<HTMLButtonElement>(root, '#fill-template').click()
    await app.pending()

    const cells = app.grid().cells
    expect(cells).toHaveLength(8)
    expect(cells[0]?.grouping).toBe('first1')
    expect(cells.map((c) => c.valence)).toEqual([
      'moderate_high', 'moderate_high', 'moderate_high', 'moderate_high',
      'moderate_low', 'moderate_low', 'moderate_low', 'moderate_low'
    ])
    expect(cells.every((c) => c.density === 'high')).toBe(true)
    expect(valenceCell(root, 5).dataset.valence).toBe('moderate_low')
  })
})

describe('generation displays exactly what the service returned', () => {
  it('edits an 8-bar grid, generates, and mirrors the response field for field', async () => {
    const service = mockService()
    const { root, app } = await mount(service)

    // Edit: two-level valence curve, one density tweak, a chosen seed.
    paint(root, 'high', 0, 3)
    paint(root, 'low', 4, 7)
    setInput(root, 'select.cell-density[data-bar="1"]', 'high')
    setInput(root, '#seed', '7')

    q<HTMLButtonElement>(root, '#generate').click()
    await app.pending()

    // The request carries the edited grid verbatim.
    expect(service.requests).toHaveLength(1)
    const request = service.requests[0]
    expect(request?.model).toBe('desk-transformer')
    expect(request?.key).toBe('major')
    expect(request?.seed).toBe(7)
    expect(request?.conditions.map((c) => c.valence)).toEqual([
      'high', 'high', 'high', 'high', 'low', 'low', 'low', 'low'
    ])
    expect(request?.conditions.map((c) => c.density)).toEqual([
      'medium', 'high', 'medium', 'medium', 'medium', 'medium', 'medium', 'medium'
    ])
    expect(request?.conditions.map((c) => c.grouping)).toEqual([
      'first1', 'first2', 'last2', 'last1', 'first1', 'first2', 'last2', 'last1'
    ])

    // Field-for-field: everything shown comes from the captured response.
    const response = service.responses[0]
    if (response === undefined) throw new Error('no response captured')
    expect(app.lastResponse()).toEqual(response)

    expect(q<HTMLElement>(root, '#summary-model').textContent).toBe(response.model)
    expect(q<HTMLElement>(root, '#summary-seed').textContent).toBe(`seed ${response.seed}`)
    expect(q<HTMLElement>(root, '#summary-temperature').textContent).toBe(
      `temperature ${(response.temperature ?? 0).toFixed(3)}`
    )
    expect(q<HTMLElement>(root, '#summary-valence').textContent).toBe(
      `piece valence ${response.piece_valence.toFixed(3)} (${response.piece_descriptor})`
    )

    // Badges: one per bar, mirroring the response's comparison verdicts.
    const badges = root.querySelectorAll('#badge-panel .badge')
    expect(badges).toHaveLength(response.bars.length)
    response.bars.forEach((bar, i) => {
      const badge = badges[i] as HTMLElement
      const valence = badge.querySelector('[data-field="valence"]') as HTMLElement
      expect(valence.dataset.requested).toBe(bar.requested.valence)
      expect(valence.dataset.realized).toBe(bar.realized_valence)
      expect(valence.dataset.match).toBe(String(bar.valence_matches))
      const density = badge.querySelector('[data-field="density"]') as HTMLElement
      expect(density.dataset.requested).toBe(bar.requested.density)
      expect(density.dataset.realized).toBe(bar.realized_density)
      expect(density.dataset.match).toBe(String(bar.density_matches))
    })

    // Piano roll: every sounding melody note and chord symbol, bar-aligned.
    const expectedNotes: Array<{ bar: number; midi: number; ticks: number }> = []
    const expectedLabels: string[] = []
    response.lead_sheet.bars.forEach((bar, barIndex) => {
      for (const event of bar.events) {
        if (event.melody !== 'rest') {
          expectedNotes.push({ bar: barIndex, midi: event.melody, ticks: event.ticks })
        }
        if (event.chord !== 'rest') expectedLabels.push(chordDisplayLabel(event.chord))
      }
    })
    const rects = Array.from(root.querySelectorAll('#roll-panel rect.note'))
    expect(rects.map((r) => ({
      bar: Number(r.getAttribute('data-bar')),
      midi: Number(r.getAttribute('data-midi')),
      ticks: Number(r.getAttribute('data-ticks'))
    }))).toEqual(expectedNotes)
    const labels = Array.from(root.querySelectorAll('#roll-panel text.chord-label'), (t) => t.textContent)
    expect(labels).toEqual(expectedLabels)

    // History records the run.
    expect(root.querySelectorAll('#history .history-entry')).toHaveLength(1)
    expect(q<HTMLElement>(root, '#history .history-entry').textContent).toContain('seed 7')
  })

  it('repeating a generation adds history entries, newest first', async () => {
    const service = mockService()
    const { root, app } = await mount(service)

    q<HTMLButtonElement>(root, '#generate').click()
    await app.pending()
    setInput(root, '#seed', '9')
    q<HTMLButtonElement>(root, '#generate').click()
    await app.pending()

    expect(service.requests.map((r) => r.seed)).toEqual([0, 9])
    const entries = Array.from(root.querySelectorAll('#history .history-entry'), (e) => e.textContent)
    expect(entries).toHaveLength(2)
    expect(entries[0]).toContain('seed 9')
    expect(entries[1]).toContain('seed 0')

    // Clicking an old entry re-displays that stored response, unmodified.
    const older = root.querySelectorAll('#history .history-entry')[1] as HTMLElement
    older.click()
    expect(app.lastResponse()).toEqual(service.responses[0])
    expect(q<HTMLElement>(root, '#summary-seed').textContent).toBe('seed 0')
  })
})

describe('failure handling', () => {
  it('shows a non-blocking toast on service errors and retry re-sends the same request', async () => {
    const service = mockService()
    const { root, app } = await mount(service)

    setInput(root, '#seed', '3')
    service.failNextGenerate('model exploded')
    q<HTMLButtonElement>(root, '#generate').click()
    await app.pending()

    const toast = q<HTMLElement>(root, '#toast')
    expect(toast.hidden).toBe(false)
    expect(q<HTMLElement>(root, '#toast-message').textContent).toContain('500: model exploded')
    expect(root.querySelectorAll('#history .history-entry')).toHaveLength(0)
    // Non-blocking: the grid is still editable and the button re-enabled.
    expect(q<HTMLButtonElement>(root, '#generate').disabled).toBe(false)

    q<HTMLButtonElement>(root, '#retry').click()
    await app.pending()

    expect(toast.hidden).toBe(true)
    expect(service.requests).toHaveLength(2)
    expect(service.requests[1]).toEqual(service.requests[0])
    expect(q<HTMLElement>(root, '#summary-seed').textContent).toBe('seed 3')
    expect(root.querySelectorAll('#history .history-entry')).toHaveLength(1)
  })
})

describe('playback controls', () => {
  it('enables play after a generation and tracks the playhead through stop', async () => {
    const service = mockService()
    const { root, app } = await mount(service)

    const play = q<HTMLButtonElement>(root, '#play')
    expect(play.disabled).toBe(true)

    q<HTMLButtonElement>(root, '#generate').click()
    await app.pending()

    expect(play.disabled).toBe(false)
    expect(q<HTMLElement>(root, '#audio-hint').hidden).toBe(true)
    expect(root.querySelector('#roll-panel .playhead')).toBeNull()

    play.click()
    const started = root.querySelector('#roll-panel .playhead')
    expect(started).not.toBeNull()
    expect(started?.getAttribute('data-playhead-bar')).toBe('0')

    q<HTMLButtonElement>(root, '#stop').click()
    const reset = root.querySelector('#roll-panel .playhead')
    expect(reset?.getAttribute('data-playhead-bar')).toBe('0') // back at the first bar
  })

  it('disables the control and shows a hint when audio is unavailable', async () => {
    const service = mockService()
    document.body.innerHTML = ''
    const root = document.createElement('div')
    document.body.append(root)
    const app = createApp(root, service.client, { contextFactory: () => null })
    await app.pending()

    q<HTMLButtonElement>(root, '#generate').click()
    await app.pending()

    expect(q<HTMLButtonElement>(root, '#play').disabled).toBe(true)
    expect(q<HTMLButtonElement>(root, '#stop').disabled).toBe(true)
    expect(q<HTMLElement>(root, '#audio-hint').hidden).toBe(false)
  })
})
