/** Client-side validation mirroring the server's rules, so most 422s are
 * caught before the request. The server stays the source of truth. */

import type { FieldSpec } from './schemaForm';

const ISO_DATE = /^\d{4}-\d{2}-\d{2}$/;

/** An empty value means "leave this category unassigned" and is always
 * acceptable; the server enforces required categories on resolution. */
export function validateValue(field: FieldSpec, value: string): string | null {
  if (value === '') return null;
  if (!value.trim()) return 'value is empty';
  if (field.kind === 'closed_vocabulary') {
    const canonical = value.normalize('NFC').trim();
    if (!field.vocabulary.includes(canonical)) {
      return `value ${JSON.stringify(value)} not in the closed vocabulary`;
    }
  }
  if (field.kind === 'calendar_date') {
    if (!ISO_DATE.test(value)) return `value ${JSON.stringify(value)} is not an ISO calendar date`;
    const [y, m, d] = value.split('-').map(Number) as [number, number, number];
    const parsed = new Date(Date.UTC(y, m - 1, d));
    if (
      parsed.getUTCFullYear() !== y ||
      parsed.getUTCMonth() !== m - 1 ||
      parsed.getUTCDate() !== d
    ) {
      return `value ${JSON.stringify(value)} is not an ISO calendar date`;
    }
  }
  return null;
}

/** Validate a whole form; returns key -> message for every bad field. */
export function validateForm(
  fields: FieldSpec[],
  values: Map<string, string>,
): Map<string, string> {
  const problems = new Map<string, string>();
  for (const field of fields) {
    const message = validateValue(field, values.get(field.key) ?? '');
    if (message) problems.set(field.key, message);
  }
  return problems;
}
