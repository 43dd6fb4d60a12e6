// Audition playback. scheduleSheet is pure arithmetic over the response
// lead sheet — melody voice at true pitch, block chords folded below
// middle C — so duration and alignment are unit-testable; Player is the
// thin Web Audio wrapper that realizes a schedule with oscillators.

import { TICKS_PER_QUARTER, chordToneMidis } from './theory.js'
import type { LeadSheetWire } from './types.js'

export const DEFAULT_BPM = 100

export type ScheduledNote = {
  voice: 'melody' | 'chord'
  midi: number
  start: number
  duration: number
  bar: number
}

export type Schedule = {
  notes: ScheduledNote[]
  barStarts: number[]
  total: number
}

export const midiToFrequency = (midi: number): number => 440 * 2 ** ((midi - 69) / 12)

export const secondsPerTick = (bpm: number): number => 60 / (bpm * TICKS_PER_QUARTER)

export const scheduleSheet = (sheet: LeadSheetWire, bpm: number = DEFAULT_BPM): Schedule => {
  const tick = secondsPerTick(bpm)
  const notes: ScheduledNote[] = []
  const barStarts: number[] = []
  let now = 0
  sheet.bars.forEach((bar, barIndex) => {
    barStarts.push(now)
    for (const event of bar.events) {
      const duration = event.ticks * tick
      if (event.melody !== 'rest') {
        notes.push({ voice: 'melody', midi: event.melody, start: now, duration, bar: barIndex })
      }
      for (const midi of chordToneMidis(event.chord)) {
        notes.push({ voice: 'chord', midi, start: now, duration, bar: barIndex })
      }
      now += duration
    }
  })
  return { notes, barStarts, total: now }
}

// Minimal surface of AudioContext so tests can inject a silent fake.
export type AudioContextLike = {
  currentTime: number
  destination: AudioNode
  createOscillator(): OscillatorNode
  createGain(): GainNode
  resume?: () => Promise<void>
}

export type PlayerEvents = {
  onBar?: (bar: number) => void
  onStop?: () => void
}

export class Player {
  private context: AudioContextLike | null = null
  private ticker: ReturnType<typeof setInterval> | null = null
  private sounding: GainNode[] = []
  private startedAt = 0
  playing = false

  constructor(private readonly contextFactory: () => AudioContextLike | null) {}

  get available(): boolean {
    try {
      this.context ??= this.contextFactory()
    } catch {
      this.context = null
    }
    return this.context !== null
  }

  play(schedule: Schedule, events: PlayerEvents = {}): boolean {
    if (!this.available || this.context === null) return false
    this.stop(events)
    const ctx = this.context
    void ctx.resume?.()
    const t0 = ctx.currentTime + 0.05
    this.startedAt = t0
    for (const note of schedule.notes) {
      const osc = ctx.createOscillator()
      const gain = ctx.createGain()
      osc.type = note.voice === 'melody' ? 'triangle' : 'sine'
      osc.frequency.value = midiToFrequency(note.midi)
      const level = note.voice === 'melody' ? 0.22 : 0.08
      const start = t0 + note.start
      const end = start + note.duration
      gain.gain.setValueAtTime(0, start)
      gain.gain.linearRampToValueAtTime(level, start + 0.01)
      gain.gain.setValueAtTime(level, Math.max(start + 0.01, end - 0.03))
      gain.gain.linearRampToValueAtTime(0, end)
      osc.connect(gain)
      gain.connect(ctx.destination)
      osc.start(start)
      osc.stop(end + 0.01)
      this.sounding.push(gain)
    }
    this.playing = true
    events.onBar?.(0)
    this.ticker = setInterval(() => {
      const elapsed = ctx.currentTime - this.startedAt
      if (elapsed >= schedule.total) {
        this.stop(events)
        return
      }
      let bar = 0
      for (let i = 0; i < schedule.barStarts.length; i++) {
        const startsAt = schedule.barStarts[i]
        if (startsAt !== undefined && elapsed >= startsAt) bar = i
      }
      events.onBar?.(bar)
    }, 50)
    return true
  }

  /** Stop immediately: silence every sounding note and reset the playhead to bar 1. */
  stop(events: PlayerEvents = {}): void {
    if (this.ticker !== null) {
      clearInterval(this.ticker)
      this.ticker = null
    }
    for (const gain of this.sounding) gain.disconnect()
    this.sounding = []
    if (this.playing) {
      this.playing = false
      events.onBar?.(0)
      events.onStop?.()
    }
  }
}
