// Editable per-bar condition grid. All operations are pure: they take a
// state and return a new one, so undo/compare/tests stay trivial. The
// grid mirrors the service enumerations and refuses to serialize a
// request that the service schema would reject.

import {
  DENSITIES,
  GROUPINGS,
  KEYS,
  MAX_BARS,
  MIN_BARS,
  TIME_SIGNATURES,
  groupingLabels,
  isDensity,
  isGrouping,
  isTimeSignature,
  isValence,
  phraseLengths,
  type DensityLabel,
  type GroupingLabel,
  type KeyLabel,
  type TimeSignatureLabel,
  type ValenceLabel
} from './theory.js'
import type { ConditionCellWire, GenerateRequestWire } from './types.js'

export type GridCell = {
  timeSignature: TimeSignatureLabel
  grouping: GroupingLabel
  valence: ValenceLabel
  density: DensityLabel
}

export type GridState = {
  cells: GridCell[]
  seed: number
  key: KeyLabel
  model: string
  phraseLength: number
}

export type CellField = keyof GridCell

const defaultCell = (grouping: GroupingLabel, timeSignature: TimeSignatureLabel = '4/4'): GridCell => ({
  timeSignature,
  grouping,
  valence: 'neutral',
  density: 'medium'
})

export const newGrid = (bars: number, phraseLength = 4): GridState => {
  const labels = groupingLabels(phraseLengths(bars, phraseLength))
  return {
    cells: labels.map((g) => defaultCell(g)),
    seed: 0,
    key: 'major',
    model: '',
    phraseLength
  }
}

/** Change the bar count: trailing cells drop, new bars get defaults, and every grouping is recomputed. */
export const resizeGrid = (state: GridState, bars: number): GridState => {
  const labels = groupingLabels(phraseLengths(bars, state.phraseLength))
  const meter = state.cells[0]?.timeSignature ?? '4/4'
  const cells = labels.map((grouping, i) => {
    const kept = state.cells[i]
    return kept ? { ...kept, grouping } : defaultCell(grouping, meter)
  })
  return { ...state, cells }
}

export const setPhraseLength = (state: GridState, phraseLength: number): GridState =>
  resizeGrid({ ...state, phraseLength }, state.cells.length)

export const setCellField = <F extends CellField>(
  state: GridState,
  index: number,
  field: F,
  value: GridCell[F]
): GridState => ({
  ...state,
  cells: state.cells.map((cell, i) => (i === index ? { ...cell, [field]: value } : cell))
})

/** Drag-to-paint a valence level across an inclusive bar range. */
export const paintValence = (
  state: GridState,
  from: number,
  to: number,
  valence: ValenceLabel
): GridState => {
  const lo = Math.min(from, to)
  const hi = Math.max(from, to)
  return {
    ...state,
    cells: state.cells.map((cell, i) => (i >= lo && i <= hi ? { ...cell, valence } : cell))
  }
}

/** One time signature for the whole piece (the service refuses mixed meters). */
export const setMeter = (state: GridState, meter: TimeSignatureLabel): GridState => ({
  ...state,
  cells: state.cells.map((cell) => ({ ...cell, timeSignature: meter }))
})

/** Replace the grid contents from a /template response. */
export const applyTemplate = (state: GridState, conditions: ConditionCellWire[]): GridState => ({
  ...state,
  cells: conditions.map((c) => ({
    timeSignature: isTimeSignature(c.time_signature) ? c.time_signature : '4/4',
    grouping: isGrouping(c.grouping) ? c.grouping : 'mid',
    valence: isValence(c.valence) ? c.valence : 'neutral',
    density: isDensity(c.density) ? c.density : 'medium'
  }))
})

/** Problems that must block submission; empty list means the grid is valid. */
export const validateGrid = (state: GridState): string[] => {
  const problems: string[] = []
  const bars = state.cells.length
  if (bars < MIN_BARS || bars > MAX_BARS) {
    problems.push(`bar count ${bars} outside ${MIN_BARS}..${MAX_BARS}`)
  }
  if (!Number.isInteger(state.seed) || state.seed < 0) {
    problems.push(`seed ${state.seed} is not a non-negative integer`)
  }
  if (!(KEYS as readonly string[]).includes(state.key)) {
    problems.push(`key ${state.key} not one of ${KEYS.join(', ')}`)
  }
  if (state.model === '') {
    problems.push('no model selected')
  }
  const meters = new Set(state.cells.map((c) => c.timeSignature))
  if (meters.size > 1) {
    problems.push('all bars must share one time signature')
  }
  state.cells.forEach((cell, i) => {
    if (!(TIME_SIGNATURES as readonly string[]).includes(cell.timeSignature)) {
      problems.push(`bar ${i + 1}: time signature ${cell.timeSignature}`)
    }
    if (!(GROUPINGS as readonly string[]).includes(cell.grouping)) {
      problems.push(`bar ${i + 1}: grouping ${cell.grouping}`)
    }
    if (!isValence(cell.valence)) {
      problems.push(`bar ${i + 1}: valence ${cell.valence}`)
    }
    if (!(DENSITIES as readonly string[]).includes(cell.density)) {
      problems.push(`bar ${i + 1}: density ${cell.density}`)
    }
  })
  return problems
}

export const toConditionCells = (state: GridState): ConditionCellWire[] =>
  state.cells.map((cell) => ({
    time_signature: cell.timeSignature,
    grouping: cell.grouping,
    valence: cell.valence,
    density: cell.density
  }))

/** Serialize for POST /generate; throws if validation would block submission. */
export const toGenerateRequest = (state: GridState): GenerateRequestWire => {
  const problems = validateGrid(state)
  if (problems.length > 0) {
    throw new Error(`grid is not submittable: ${problems.join('; ')}`)
  }
  return {
    model: state.model,
    conditions: toConditionCells(state),
    key: state.key,
    seed: state.seed
  }
}
