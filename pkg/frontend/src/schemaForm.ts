/** Schema-driven form generation: the edit form is derived entirely from
 * the schema document, so a new category in the schema becomes a new form
 * field with zero UI code changes. */

import type { SchemaNode } from './types';

export interface FieldSpec {
  path: string[];
  /** '/'-joined path with '\/' escapes; matches the server's 422 error keys. */
  key: string;
  label: string;
  kind: SchemaNode['kind'];
  cardinality: SchemaNode['cardinality'];
  vocabulary: string[];
}

export function pathKey(path: string[]): string {
  return path.map((s) => s.replace(/\\/g, '\\\\').replace(/\//g, '\\/')).join('/');
}

/** Depth-first walk over the schema's value leaves (containers render as
 * group headings, not fields). */
export function schemaFields(schema: SchemaNode): FieldSpec[] {
  const fields: FieldSpec[] = [];
  const walk = (node: SchemaNode, prefix: string[]) => {
    for (const child of node.children ?? []) {
      const path = [...prefix, child.name];
      if (child.kind === 'none') {
        walk(child, path);
      } else {
        fields.push({
          path,
          key: pathKey(path),
          label: path.join(' / '),
          kind: child.kind,
          cardinality: child.cardinality,
          vocabulary: child.vocabulary ?? [],
        });
      }
    }
  };
  walk(schema, []);
  return fields;
}

/** The control a field renders as; mirrors the value kinds the server
 * validates. */
export function controlFor(field: FieldSpec): 'select' | 'date' | 'text' {
  if (field.kind === 'closed_vocabulary') return 'select';
  if (field.kind === 'calendar_date') return 'date';
  return 'text';
}
