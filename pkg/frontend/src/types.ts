/** Wire types for the review service JSON API. */

export interface SchemaNode {
  name: string;
  kind: 'none' | 'free_text' | 'closed_vocabulary' | 'entity_reference' | 'calendar_date' | 'place_name';
  cardinality: 'optional' | 'required' | 'repeated';
  vocabulary?: string[];
  children?: SchemaNode[];
  version?: string;
}

export interface EventAssignment {
  path: string[];
  value: string;
  provenance: 'extracted' | 'enriched' | 'human';
}

export interface CodedEvent {
  record_id: number;
  ordinal: number;
  status: 'auto' | 'flagged' | 'resolved' | 'rejected';
  description: string;
  span: [number, number] | null;
  flags: string[];
  assignments: EventAssignment[];
}

export interface ReviewItem {
  record_id: number;
  ordinal: number;
  description: string;
  span: [number, number] | null;
  flags: string[];
  date: string | null;
  place: string | null;
  event: CodedEvent;
}

export interface Progress {
  auto: number;
  flagged: number;
  resolved: number;
  rejected: number;
  total: number;
}

export type Verdict = 'accept_as_is' | 'corrected' | 'rejected';

export interface Resolution {
  verdict: Verdict;
  verifier_id: string;
  assignments: { path: string[]; value: string }[];
}

export interface FieldError {
  path: string;
  message: string;
}
