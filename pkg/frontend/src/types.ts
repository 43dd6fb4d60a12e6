// Wire types for the service JSON API, field-for-field.

export type ConditionCellWire = {
  time_signature: string
  grouping: string
  valence: string
  density: string
}

export type GenerateRequestWire = {
  model: string
  conditions: ConditionCellWire[]
  key: string
  seed: number
  temperature?: number | null
  greedy?: boolean
}

export type RealizedBarWire = {
  requested: ConditionCellWire
  realized_valence: string
  realized_density: string
  valence_matches: boolean
  density_matches: boolean
}

export type EventWire = {
  chord: string
  melody: number | 'rest'
  ticks: number
}

export type BarWire = {
  time_signature: string
  grouping: string
  events: EventWire[]
}

export type LeadSheetWire = {
  key: string
  title: string
  source: string
  bars: BarWire[]
}

export type GenerateResponseWire = {
  schema_version: number
  model: string
  seed: number
  temperature: number | null
  lead_sheet: LeadSheetWire
  tokens: number[]
  musicxml: string
  bars: RealizedBarWire[]
  piece_valence: number
  piece_descriptor: string
}

export type TemplateResponseWire = {
  schema_version: number
  profile: string
  conditions: ConditionCellWire[]
}

export type ModelInfoWire = {
  name: string
  architecture: string
  parameters: number
}

export type ModelsResponseWire = {
  schema_version: number
  models: ModelInfoWire[]
  profiles: string[]
}
