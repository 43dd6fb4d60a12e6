// Single-page wiring: condition grid editor, generation, response
// rendering, history, and audition playback. State lives in two places
// only — the immutable grid state and the list of service responses —
// and every visible element is re-derived from one of them.

import { ServiceClient } from './client.js'
import {
  applyTemplate,
  newGrid,
  paintValence,
  resizeGrid,
  setCellField,
  setMeter,
  setPhraseLength,
  toGenerateRequest,
  validateGrid,
  type GridState
} from './grid.js'
import { DEFAULT_BPM, Player, scheduleSheet, type AudioContextLike } from './playback.js'
import { badgeRows, renderBadges, renderRoll, rollModel } from './render.js'
import {
  DENSITIES,
  GROUPINGS,
  KEYS,
  MAX_BARS,
  MIN_BARS,
  TIME_SIGNATURES,
  VALENCES,
  isDensity,
  isGrouping,
  isTimeSignature,
  isValence,
  type ValenceLabel
} from './theory.js'
import type { GenerateRequestWire, GenerateResponseWire } from './types.js'

export type HistoryEntry = { label: string; response: GenerateResponseWire }

export type App = {
  root: HTMLElement
  grid: () => GridState
  lastResponse: () => GenerateResponseWire | null
  history: () => readonly HistoryEntry[]
  /** Settles when the most recently started async action is done. */
  pending: () => Promise<void>
}

type AppOptions = {
  contextFactory?: () => AudioContextLike | null
}

const el = <K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = ''
): HTMLElementTagNameMap[K] => {
  const node = document.createElement(tag)
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value)
  if (text) node.textContent = text
  return node
}

const option = (value: string, label = value): HTMLOptionElement => {
  const o = el('option', { value }, label)
  return o
}

const defaultContextFactory = (): AudioContextLike | null => {
  const Ctor = (globalThis as { AudioContext?: new () => AudioContext }).AudioContext
  return Ctor ? new Ctor() : null
}

export const createApp = (root: HTMLElement, client: ServiceClient, options: AppOptions = {}): App => {
  let grid = newGrid(8)
  let lastResponse: GenerateResponseWire | null = null
  let lastRequest: GenerateRequestWire | null = null
  const history: HistoryEntry[] = []
  let painting = false
  let paintAnchor = 0
  let playheadBar = -1
  let pending: Promise<void> = Promise.resolve()
  const player = new Player(options.contextFactory ?? defaultContextFactory)

  // ---- static skeleton --------------------------------------------------

  const controls = el('div', { class: 'controls' })
  const modelSelect = el('select', { id: 'model' })
  const barsInput = el('input', {
    id: 'bars',
    type: 'number',
    min: String(MIN_BARS),
    max: String(MAX_BARS),
    value: '8'
  })
  const phraseSelect = el('select', { id: 'phrase' })
  for (const p of [2, 4, 8]) phraseSelect.append(option(String(p)))
  phraseSelect.value = '4'
  const meterSelect = el('select', { id: 'meter' })
  for (const ts of TIME_SIGNATURES) meterSelect.append(option(ts))
  const keySelect = el('select', { id: 'key' })
  for (const key of KEYS) keySelect.append(option(key))
  const seedInput = el('input', { id: 'seed', type: 'number', min: '0', value: '0' })
  const brushSelect = el('select', { id: 'brush', title: 'valence paint level' })
  for (const v of VALENCES) brushSelect.append(option(v))
  brushSelect.value = 'high'
  const profileSelect = el('select', { id: 'profile' })
  const templateButton = el('button', { id: 'fill-template', type: 'button' }, 'fill from template')
  const generateButton = el('button', { id: 'generate', type: 'button' }, 'generate')

  const tempoInput = el('input', { id: 'tempo', type: 'number', min: '30', max: '240', value: String(DEFAULT_BPM) })
  const playButton = el('button', { id: 'play', type: 'button' }, 'play')
  const stopButton = el('button', { id: 'stop', type: 'button' }, 'stop')
  const audioHint = el('span', { id: 'audio-hint', hidden: '' }, 'audio unavailable in this browser')

  const labelled = (text: string, node: HTMLElement): HTMLElement => {
    const wrap = el('label', { class: 'field' }, text + ' ')
    wrap.append(node)
    return wrap
  }
  controls.append(
    labelled('model', modelSelect),
    labelled('bars', barsInput),
    labelled('phrase', phraseSelect),
    labelled('meter', meterSelect),
    labelled('key', keySelect),
    labelled('seed', seedInput),
    labelled('brush', brushSelect),
    labelled('profile', profileSelect),
    templateButton,
    generateButton,
    labelled('tempo', tempoInput),
    playButton,
    stopButton,
    audioHint
  )

  const problems = el('ul', { id: 'problems' })
  const gridTable = el('table', { id: 'grid' })
  const toast = el('div', { id: 'toast', hidden: '' })
  const toastMessage = el('span', { id: 'toast-message' })
  const retryButton = el('button', { id: 'retry', type: 'button' }, 'retry')
  toast.append(toastMessage, retryButton)

  const summary = el('div', { id: 'summary' })
  const badgePanel = el('div', { id: 'badge-panel' })
  const rollPanel = el('div', { id: 'roll-panel' })
  const historyList = el('ol', { id: 'history' })

  root.replaceChildren(controls, problems, gridTable, toast, summary, badgePanel, rollPanel, historyList)

  // ---- rendering ---------------------------------------------------------

  const renderProblems = () => {
    const found = validateGrid(grid)
    problems.replaceChildren(...found.map((p) => el('li', { class: 'problem' }, p)))
    generateButton.disabled = found.length > 0
  }

  const renderGrid = () => {
    const bars = grid.cells.length
    const head = el('tr', {})
    head.append(el('th', {}, 'bar'))
    for (let i = 0; i < bars; i++) head.append(el('th', {}, String(i + 1)))

    const groupingRow = el('tr', { 'data-row': 'grouping' })
    groupingRow.append(el('th', {}, 'grouping'))
    const valenceRow = el('tr', { 'data-row': 'valence' })
    valenceRow.append(el('th', {}, 'valence'))
    const densityRow = el('tr', { 'data-row': 'density' })
    densityRow.append(el('th', {}, 'density'))

    grid.cells.forEach((cell, i) => {
      const groupingCell = el('td', {})
      const groupingSelect = el('select', { class: 'cell-grouping', 'data-bar': String(i) })
      for (const g of GROUPINGS) groupingSelect.append(option(g))
      groupingSelect.value = cell.grouping
      groupingSelect.addEventListener('change', () => {
        if (isGrouping(groupingSelect.value)) {
          grid = setCellField(grid, i, 'grouping', groupingSelect.value)
          renderProblems()
        }
      })
      groupingCell.append(groupingSelect)
      groupingRow.append(groupingCell)

      const valenceCell = el(
        'td',
        {
          class: `cell-valence v-${cell.valence}`,
          'data-bar': String(i),
          'data-valence': cell.valence
        },
        cell.valence
      )
      valenceCell.addEventListener('mousedown', (event) => {
        event.preventDefault()
        painting = true
        paintAnchor = i
        applyBrush(i, i)
      })
      valenceCell.addEventListener('mouseenter', () => {
        if (painting) applyBrush(paintAnchor, i)
      })
      valenceRow.append(valenceCell)

      const densityCell = el('td', {})
      const densitySelect = el('select', { class: 'cell-density', 'data-bar': String(i) })
      for (const d of DENSITIES) densitySelect.append(option(d))
      densitySelect.value = cell.density
      densitySelect.addEventListener('change', () => {
        if (isDensity(densitySelect.value)) {
          grid = setCellField(grid, i, 'density', densitySelect.value)
          renderProblems()
        }
      })
      densityCell.append(densitySelect)
      densityRow.append(densityCell)
    })

    gridTable.replaceChildren(head, groupingRow, valenceRow, densityRow)
    renderProblems()
  }

  const applyBrush = (from: number, to: number) => {
    const brush = brushSelect.value
    if (!isValence(brush)) return
    grid = paintValence(grid, from, to, brush as ValenceLabel)
    renderGrid()
  }

  document.addEventListener('mouseup', () => {
    painting = false
  })

  const renderResponse = () => {
    if (lastResponse === null) return
    const r = lastResponse
    summary.replaceChildren(
      el('span', { id: 'summary-model' }, r.model),
      el('span', { id: 'summary-seed' }, `seed ${r.seed}`),
      el(
        'span',
        { id: 'summary-temperature' },
        r.temperature === null ? 'greedy' : `temperature ${r.temperature.toFixed(3)}`
      ),
      el(
        'span',
        { id: 'summary-valence' },
        `piece valence ${r.piece_valence.toFixed(3)} (${r.piece_descriptor})`
      )
    )
    badgePanel.replaceChildren(renderBadges(badgeRows(r.bars)))
    rollPanel.replaceChildren(renderRoll(rollModel(r.lead_sheet), playheadBar))
    playButton.disabled = !player.available
    stopButton.disabled = !player.available
    audioHint.hidden = player.available
  }

  const renderHistory = () => {
    historyList.replaceChildren(
      ...history.map((entry, i) => {
        const item = el('li', { class: 'history-entry', 'data-index': String(i) }, entry.label)
        item.addEventListener('click', () => {
          lastResponse = entry.response
          playheadBar = -1
          renderResponse()
        })
        return item
      })
    )
  }

  const showToast = (message: string) => {
    toastMessage.textContent = message
    toast.hidden = false
  }

  // ---- actions -----------------------------------------------------------

  const runGenerate = async (request: GenerateRequestWire) => {
    lastRequest = request
    generateButton.disabled = true
    try {
      const outcome = await client.generate(request)
      if (outcome.kind === 'stale') return
      if (outcome.kind === 'error') {
        showToast(`generation failed — ${outcome.message}`)
        return
      }
      toast.hidden = true
      lastResponse = outcome.response
      playheadBar = -1
      history.unshift({
        label: `${outcome.response.model} · ${outcome.response.bars.length} bars · seed ${outcome.response.seed}`,
        response: outcome.response
      })
      renderHistory()
      renderResponse()
    } finally {
      generateButton.disabled = validateGrid(grid).length > 0
    }
  }

  generateButton.addEventListener('click', () => {
    const found = validateGrid(grid)
    if (found.length > 0) {
      renderProblems()
      return
    }
    pending = runGenerate(toGenerateRequest(grid))
  })

  retryButton.addEventListener('click', () => {
    if (lastRequest !== null) pending = runGenerate(lastRequest)
  })

  templateButton.addEventListener('click', () => {
    pending = (async () => {
      try {
        const bars = grid.cells.length
        const profile = profileSelect.value || 'default'
        const response = await client.template(bars, profile, grid.seed)
        grid = applyTemplate(grid, response.conditions)
        const meter = grid.cells[0]?.timeSignature
        if (meter !== undefined) meterSelect.value = meter
        renderGrid()
      } catch (err) {
        showToast(`template failed — ${err instanceof Error ? err.message : String(err)}`)
      }
    })()
  })

  barsInput.addEventListener('change', () => {
    const bars = Number(barsInput.value)
    if (Number.isInteger(bars) && bars >= MIN_BARS && bars <= MAX_BARS) {
      grid = resizeGrid(grid, bars)
      renderGrid()
    } else {
      renderProblems()
      problems.append(el('li', { class: 'problem' }, `bar count must be ${MIN_BARS}..${MAX_BARS}`))
      generateButton.disabled = true
    }
  })

  phraseSelect.addEventListener('change', () => {
    grid = setPhraseLength(grid, Number(phraseSelect.value))
    renderGrid()
  })

  meterSelect.addEventListener('change', () => {
    if (isTimeSignature(meterSelect.value)) {
      grid = setMeter(grid, meterSelect.value)
      renderGrid()
    }
  })

  keySelect.addEventListener('change', () => {
    grid = { ...grid, key: keySelect.value === 'minor' ? 'minor' : 'major' }
  })

  seedInput.addEventListener('change', () => {
    grid = { ...grid, seed: Number(seedInput.value) }
    renderProblems()
  })

  modelSelect.addEventListener('change', () => {
    grid = { ...grid, model: modelSelect.value }
    renderProblems()
  })

  playButton.addEventListener('click', () => {
    if (lastResponse === null) return
    const bpm = Number(tempoInput.value) || DEFAULT_BPM
    const schedule = scheduleSheet(lastResponse.lead_sheet, bpm)
    player.play(schedule, {
      onBar: (bar) => {
        playheadBar = bar
        renderResponse()
      },
      onStop: () => {
        playheadBar = 0
        renderResponse()
      }
    })
  })

  stopButton.addEventListener('click', () => {
    player.stop({
      onBar: (bar) => {
        playheadBar = bar
        renderResponse()
      }
    })
  })

  // ---- bootstrap ----------------------------------------------------------

  playButton.disabled = true
  stopButton.disabled = true
  audioHint.hidden = player.available

  pending = (async () => {
    try {
      const available = await client.models()
      modelSelect.replaceChildren(...available.models.map((m) => option(m.name)))
      profileSelect.replaceChildren(...available.profiles.map((p) => option(p)))
      const first = available.models[0]
      if (first !== undefined) grid = { ...grid, model: first.name }
      renderProblems()
    } catch (err) {
      showToast(`service unreachable — ${err instanceof Error ? err.message : String(err)}`)
    }
  })()

  renderGrid()

  return {
    root,
    grid: () => grid,
    lastResponse: () => lastResponse,
    history: () => history,
    pending: () => pending
  }
}
