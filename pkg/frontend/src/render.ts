// Rendering of a generation response: a piano roll with a chord-symbol
// lane, plus the requested-vs-realized badge panel. Everything shown is
// computed from response fields alone — the UI never invents musical
// data. The display model is built first as plain data so tests can
// compare it field-for-field against the response.

import { barCapacity, chordDisplayLabel, isTimeSignature } from './theory.js'
import type { LeadSheetWire, RealizedBarWire } from './types.js'

export type RollNote = { bar: number; startTick: number; ticks: number; midi: number }
export type ChordMark = { bar: number; startTick: number; chord: string; label: string }
export type RollModel = {
  bars: number
  capacity: number
  notes: RollNote[]
  chords: ChordMark[]
  lowest: number
  highest: number
}

export type BadgeSide = { requested: string; realized: string; match: boolean }
export type BadgeRow = { bar: number; valence: BadgeSide; density: BadgeSide }

export const rollModel = (sheet: LeadSheetWire): RollModel => {
  const first = sheet.bars[0]
  const capacity = first && isTimeSignature(first.time_signature) ? barCapacity(first.time_signature) : 96
  const notes: RollNote[] = []
  const chords: ChordMark[] = []
  sheet.bars.forEach((bar, barIndex) => {
    let tick = 0
    for (const event of bar.events) {
      if (event.melody !== 'rest') {
        notes.push({ bar: barIndex, startTick: tick, ticks: event.ticks, midi: event.melody })
      }
      if (event.chord !== 'rest') {
        chords.push({
          bar: barIndex,
          startTick: tick,
          chord: event.chord,
          label: chordDisplayLabel(event.chord)
        })
      }
      tick += event.ticks
    }
  })
  const pitches = notes.map((n) => n.midi)
  return {
    bars: sheet.bars.length,
    capacity,
    notes,
    chords,
    lowest: pitches.length ? Math.min(...pitches) : 60,
    highest: pitches.length ? Math.max(...pitches) : 72
  }
}

/** Badge state straight from the response's per-bar comparison fields. */
export const badgeRows = (bars: RealizedBarWire[]): BadgeRow[] =>
  bars.map((bar, i) => ({
    bar: i,
    valence: {
      requested: bar.requested.valence,
      realized: bar.realized_valence,
      match: bar.valence_matches
    },
    density: {
      requested: bar.requested.density,
      realized: bar.realized_density,
      match: bar.density_matches
    }
  }))

const SVG_NS = 'http://www.w3.org/2000/svg'
const BAR_WIDTH = 120
const NOTE_HEIGHT = 7
const CHORD_LANE = 22

const svgElement = <K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number>
): SVGElementTagNameMap[K] => {
  const el = document.createElementNS(SVG_NS, name)
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, String(value))
  return el
}

export const renderRoll = (model: RollModel, playheadBar = -1): SVGSVGElement => {
  const span = model.highest - model.lowest + 1
  const height = CHORD_LANE + span * NOTE_HEIGHT + 8
  const width = model.bars * BAR_WIDTH
  const svg = svgElement('svg', {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
    class: 'roll'
  })
  const x = (bar: number, tick: number) => bar * BAR_WIDTH + (tick / model.capacity) * BAR_WIDTH
  const y = (midi: number) => CHORD_LANE + (model.highest - midi) * NOTE_HEIGHT
  for (let bar = 0; bar <= model.bars; bar++) {
    svg.append(
      svgElement('line', {
        x1: bar * BAR_WIDTH,
        x2: bar * BAR_WIDTH,
        y1: 0,
        y2: height,
        class: 'barline'
      })
    )
  }
  if (playheadBar >= 0 && playheadBar < model.bars) {
    svg.append(
      svgElement('rect', {
        x: playheadBar * BAR_WIDTH,
        y: 0,
        width: BAR_WIDTH,
        height,
        class: 'playhead',
        'data-playhead-bar': playheadBar
      })
    )
  }
  for (const mark of model.chords) {
    const text = svgElement('text', {
      x: x(mark.bar, mark.startTick) + 2,
      y: CHORD_LANE - 8,
      class: 'chord-label',
      'data-bar': mark.bar,
      'data-tick': mark.startTick,
      'data-chord': mark.chord
    })
    text.textContent = mark.label
    svg.append(text)
  }
  for (const note of model.notes) {
    svg.append(
      svgElement('rect', {
        x: x(note.bar, note.startTick),
        y: y(note.midi),
        width: (note.ticks / model.capacity) * BAR_WIDTH - 1,
        height: NOTE_HEIGHT - 1,
        class: 'note',
        'data-bar': note.bar,
        'data-tick': note.startTick,
        'data-ticks': note.ticks,
        'data-midi': note.midi
      })
    )
  }
  return svg
}

export const renderBadges = (rows: BadgeRow[]): HTMLElement => {
  const panel = document.createElement('div')
  panel.className = 'badges'
  for (const row of rows) {
    const badge = document.createElement('div')
    badge.className = 'badge'
    badge.dataset.bar = String(row.bar)
    for (const [name, side] of [
      ['valence', row.valence],
      ['density', row.density]
    ] as const) {
      const cell = document.createElement('span')
      cell.className = side.match ? 'badge-cell match' : 'badge-cell mismatch'
      cell.dataset.field = name
      cell.dataset.requested = side.requested
      cell.dataset.realized = side.realized
      cell.dataset.match = String(side.match)
      cell.textContent = side.match
        ? `${name}: ${side.realized}`
        : `${name}: wanted ${side.requested}, got ${side.realized}`
      badge.append(cell)
    }
    panel.append(badge)
  }
  return panel
}
