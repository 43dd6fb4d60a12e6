// Musical constants mirrored from the service wire conventions: meter
// labels and capacities on the 24-ticks-per-quarter grid, the five-way
// phrase-position labels and their assignment law, chord spelling, and
// the chord-tone templates used for audition playback.

export const TICKS_PER_QUARTER = 24

export const TIME_SIGNATURES = ['4/4', '3/4', '2/2', '2/4', '6/8'] as const
export type TimeSignatureLabel = (typeof TIME_SIGNATURES)[number]

export const GROUPINGS = ['first1', 'first2', 'mid', 'last2', 'last1'] as const
export type GroupingLabel = (typeof GROUPINGS)[number]

export const VALENCES = ['low', 'moderate_low', 'neutral', 'moderate_high', 'high'] as const
export type ValenceLabel = (typeof VALENCES)[number]

export const DENSITIES = ['low', 'medium', 'high'] as const
export type DensityLabel = (typeof DENSITIES)[number]

export const KEYS = ['major', 'minor'] as const
export type KeyLabel = (typeof KEYS)[number]

export const MIN_BARS = 1
export const MAX_BARS = 32

export const ROOTS = ['C', 'C#', 'D', 'D#', 'E', 'F', 'F#', 'G', 'G#', 'A', 'A#', 'B'] as const

// chord tones as semitone offsets from the root, one entry per quality label
export const CHORD_TEMPLATES: Record<string, readonly number[]> = {
  maj: [0, 4, 7],
  min: [0, 3, 7],
  dom7: [0, 4, 7, 10],
  maj7: [0, 4, 7, 11],
  min7: [0, 3, 7, 10],
  dom9: [0, 4, 7, 10, 2],
  min9: [0, 3, 7, 10, 2],
  dim: [0, 3, 6]
}

const QUALITY_SUFFIXES: Record<string, string> = {
  maj: '',
  min: 'm',
  dom7: '7',
  maj7: 'maj7',
  min7: 'm7',
  dom9: '9',
  min9: 'm9',
  dim: 'dim'
}

export const barCapacity = (ts: TimeSignatureLabel): number => {
  const parts = ts.split('/').map(Number)
  const beats = parts[0] ?? 4
  const unit = parts[1] ?? 4
  return (beats * TICKS_PER_QUARTER * 4) / unit
}

export const isTimeSignature = (value: string): value is TimeSignatureLabel =>
  (TIME_SIGNATURES as readonly string[]).includes(value)

export const isGrouping = (value: string): value is GroupingLabel =>
  (GROUPINGS as readonly string[]).includes(value)

export const isValence = (value: string): value is ValenceLabel =>
  (VALENCES as readonly string[]).includes(value)

export const isDensity = (value: string): value is DensityLabel =>
  (DENSITIES as readonly string[]).includes(value)

/** Split a bar span into fixed phrases; the last phrase takes the remainder. */
export const phraseLengths = (barCount: number, phraseLength: number): number[] => {
  if (barCount < 1) throw new Error('barCount must be >= 1')
  const lengths: number[] = []
  for (let i = 0; i < Math.floor(barCount / phraseLength); i++) lengths.push(phraseLength)
  if (barCount % phraseLength) lengths.push(barCount % phraseLength)
  return lengths
}

/**
 * Phrase-position label per bar. Within each phrase the extremes win
 * first (first1, then last1/last2), then first2, everything else is mid,
 * so a 3-bar phrase reads [first1, last2, last1].
 */
export const groupingLabels = (lengths: number[]): GroupingLabel[] => {
  const labels: GroupingLabel[] = []
  for (const length of lengths) {
    for (let i = 0; i < length; i++) {
      if (i === 0) labels.push('first1')
      else if (i === length - 1) labels.push('last1')
      else if (i === length - 2) labels.push('last2')
      else if (i === 1) labels.push('first2')
      else labels.push('mid')
    }
  }
  return labels
}

/** "D#:min7" -> "D#m7"; "rest" -> "" (nothing to print in the chord lane). */
export const chordDisplayLabel = (chord: string): string => {
  if (chord === 'rest') return ''
  const [root, quality] = chord.split(':')
  if (root === undefined || quality === undefined) return chord
  const suffix = QUALITY_SUFFIXES[quality]
  return suffix === undefined ? chord : root + suffix
}

/** Chord-tone pitches for playback, folded into the octave below middle C. */
export const chordToneMidis = (chord: string, base = 48): number[] => {
  if (chord === 'rest') return []
  const [root, quality] = chord.split(':')
  if (root === undefined || quality === undefined) return []
  const rootPc = (ROOTS as readonly string[]).indexOf(root)
  const template = CHORD_TEMPLATES[quality]
  if (rootPc < 0 || template === undefined) return []
  return template.map((offset) => base + ((rootPc + offset) % 12))
}
