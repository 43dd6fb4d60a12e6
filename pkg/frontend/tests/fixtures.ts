// Shared builders for tests: deterministic wire payloads shaped exactly
// like the service's JSON, plus a silent AudioContext stand-in.

import type { AudioContextLike } from '../src/playback.js'
import type {
  BarWire,
  ConditionCellWire,
  GenerateResponseWire,
  LeadSheetWire,
  ModelsResponseWire,
  RealizedBarWire
} from '../src/types.js'

const CHORD_CYCLE = ['C:maj', 'G:dom7', 'A:min', 'F:maj7'] as const

/** One full 4/4 bar (96 ticks): chord+note, chord+melody rest, bare note. */
export const makeBar = (index: number): BarWire => ({
  time_signature: '4/4',
  grouping: ['first1', 'first2', 'last2', 'last1'][index % 4] ?? 'mid',
  events: [
    { chord: CHORD_CYCLE[index % CHORD_CYCLE.length] ?? 'C:maj', melody: 60 + (index % 12), ticks: 48 },
    { chord: CHORD_CYCLE[(index + 1) % CHORD_CYCLE.length] ?? 'C:maj', melody: 'rest', ticks: 24 },
    { chord: 'rest', melody: 67, ticks: 24 }
  ]
})

export const makeSheet = (bars: number): LeadSheetWire => ({
  key: 'major',
  title: 'fixture piece',
  source: 'tests',
  bars: Array.from({ length: bars }, (_, i) => makeBar(i))
})

export const makeCondition = (overrides: Partial<ConditionCellWire> = {}): ConditionCellWire => ({
  time_signature: '4/4',
  grouping: 'mid',
  valence: 'neutral',
  density: 'medium',
  ...overrides
})

export const makeRealizedBar = (
  requested: ConditionCellWire,
  realizedValence: string,
  realizedDensity: string
): RealizedBarWire => ({
  requested,
  realized_valence: realizedValence,
  realized_density: realizedDensity,
  valence_matches: requested.valence === realizedValence,
  density_matches: requested.density === realizedDensity
})

export const makeResponse = (
  conditions: ConditionCellWire[],
  overrides: Partial<GenerateResponseWire> = {}
): GenerateResponseWire => ({
  schema_version: 1,
  model: 'desk-transformer',
  seed: 0,
  temperature: 1.0,
  lead_sheet: makeSheet(conditions.length),
  tokens: Array.from({ length: 2 + conditions.length }, (_, i) => i),
  musicxml: '<score-partwise/>',
  bars: conditions.map((cell, i) =>
    makeRealizedBar(cell, i % 3 === 2 ? 'neutral' : cell.valence, cell.density)
  ),
  piece_valence: 0.42,
  piece_descriptor: 'moderate_high',
  ...overrides
})

export const makeModels = (): ModelsResponseWire => ({
  schema_version: 1,
  models: [
    { name: 'desk-transformer', architecture: 'transformer', parameters: 701838 },
    { name: 'desk-lstm', architecture: 'lstm', parameters: 919950 }
  ],
  profiles: ['default', 'arc']
})

export const jsonResponse = (body: unknown, status = 200): Response =>
  new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' }
  })

// ---- fake audio graph ------------------------------------------------------

export type FakeOscillator = {
  type: string
  frequency: { value: number }
  startedAt: number | null
  stoppedAt: number | null
  connect: (target: unknown) => void
  start: (when: number) => void
  stop: (when: number) => void
}

export type FakeGain = {
  ramps: Array<{ kind: 'set' | 'ramp'; level: number; at: number }>
  connected: boolean
  gain: {
    setValueAtTime: (level: number, at: number) => void
    linearRampToValueAtTime: (level: number, at: number) => void
  }
  connect: (target: unknown) => void
  disconnect: () => void
}

export type FakeAudio = {
  context: AudioContextLike
  oscillators: FakeOscillator[]
  gains: FakeGain[]
  resumed: number
  setTime: (seconds: number) => void
}

export const fakeAudio = (): FakeAudio => {
  const oscillators: FakeOscillator[] = []
  const gains: FakeGain[] = []
  let currentTime = 0
  const context = {
    get currentTime() {
      return currentTime
    },
    destination: { kind: 'destination' } as unknown as AudioNode,
    createOscillator(): OscillatorNode {
      const osc: FakeOscillator = {
        type: 'sine',
        frequency: { value: 0 },
        startedAt: null,
        stoppedAt: null,
        connect: () => undefined,
        start: (when: number) => {
          osc.startedAt = when
        },
        stop: (when: number) => {
          osc.stoppedAt = when
        }
      }
      oscillators.push(osc)
      return osc as unknown as OscillatorNode
    },
    createGain(): GainNode {
      const gain: FakeGain = {
        ramps: [],
        connected: true,
        gain: {
          setValueAtTime: (level: number, at: number) => {
            gain.ramps.push({ kind: 'set', level, at })
          },
          linearRampToValueAtTime: (level: number, at: number) => {
            gain.ramps.push({ kind: 'ramp', level, at })
          }
        },
        connect: () => undefined,
        disconnect: () => {
          gain.connected = false
        }
      }
      gains.push(gain)
      return gain as unknown as GainNode
    },
    resume: () => {
      fake.resumed += 1
      return Promise.resolve()
    }
  } as AudioContextLike
  const fake: FakeAudio = {
    context,
    oscillators,
    gains,
    resumed: 0,
    setTime: (seconds: number) => {
      currentTime = seconds
    }
  }
  return fake
}
