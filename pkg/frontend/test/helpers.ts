/** Shared test scaffolding: the shipped schema's shape, fixture-like
 * review items, and an in-memory fake of the review service installed over
 * global fetch. */

import { vi } from 'vitest';
import type { Progress, ReviewItem, SchemaNode } from '../src/types';

export function fixtureSchema(): SchemaNode {
  return {
    name: 'Event',
    kind: 'none',
    cardinality: 'required',
    children: [
      { name: 'Subject', kind: 'entity_reference', cardinality: 'required' },
      { name: 'Verb', kind: 'free_text', cardinality: 'optional' },
      { name: 'Object', kind: 'entity_reference', cardinality: 'optional' },
      {
        name: 'Internal Politics',
        kind: 'none',
        cardinality: 'optional',
        children: [
          {
            name: 'Political Organizations',
            kind: 'none',
            cardinality: 'optional',
            children: [
              { name: 'Political Parties', kind: 'free_text', cardinality: 'optional' },
              {
                name: 'Goverment',
                kind: 'closed_vocabulary',
                cardinality: 'optional',
                vocabulary: ['Prodi II', 'Berlusconi IV', 'Monti'],
              },
              {
                name: 'Parliamentary/Extraparliamentary',
                kind: 'closed_vocabulary',
                cardinality: 'optional',
                vocabulary: ['Parliamentary', 'Extraparliamentary'],
              },
              {
                name: 'Majority/Minority Political Parties',
                kind: 'closed_vocabulary',
                cardinality: 'optional',
                vocabulary: ['Majority', 'Minority'],
              },
              { name: 'Party Name', kind: 'free_text', cardinality: 'optional' },
            ],
          },
          {
            name: 'Legislative Power',
            kind: 'none',
            cardinality: 'optional',
            children: [
              { name: 'Chamber of Deputies', kind: 'free_text', cardinality: 'optional' },
              { name: 'Senate of the Republic', kind: 'free_text', cardinality: 'optional' },
            ],
          },
        ],
      },
      { name: 'Date', kind: 'calendar_date', cardinality: 'required' },
      { name: 'Place', kind: 'place_name', cardinality: 'required' },
    ],
  };
}

function item(
  recordId: number,
  ordinal: number,
  description: string,
  span: [number, number] | null,
  object: string,
): ReviewItem {
  return {
    record_id: recordId,
    ordinal,
    description,
    span,
    flags: ['unresolved_actor'],
    date: '2006-06-07',
    place: 'Palazzo del Quirinale',
    event: {
      record_id: recordId,
      ordinal,
      status: 'flagged',
      description,
      span,
      flags: ['unresolved_actor'],
      assignments: [
        { path: ['Subject'], value: 'Presidente della Repubblica', provenance: 'extracted' },
        { path: ['Verb'], value: 'incontra', provenance: 'extracted' },
        { path: ['Object'], value: object, provenance: 'extracted' },
        { path: ['Date'], value: '2006-06-07', provenance: 'extracted' },
        { path: ['Place'], value: 'Palazzo del Quirinale', provenance: 'extracted' },
      ],
    },
  };
}

export function fixtureItems(): ReviewItem[] {
  const row1 =
    'On. Sen. Franco MARINI, Presidente del Senato della Repubblica,' +
    ' e On. Fausto BERTINOTTI, Presidente della Camera dei Deputati';
  const row2 = 'On. Silvio BERLUSCONI, Presidente di Forza Italia';
  return [
    item(1, 1, row1, [16, 22], 'On. Sen. Franco MARINI'),
    item(1, 2, row1, [68, 78], 'On. Fausto BERTINOTTI'),
    item(2, 1, row2, [11, 21], 'On. Silvio BERLUSCONI'),
  ];
}

export interface FakeService {
  pending: ReviewItem[];
  progress: Progress;
  posts: { url: string; body: any }[];
  /** place values the server pretends are invalid, to exercise 422s. */
  rejectPlaces: Set<string>;
}

export function installFakeService(schema: SchemaNode, items: ReviewItem[]): FakeService {
  const service: FakeService = {
    pending: [...items],
    progress: { auto: 1, flagged: items.length, resolved: 0, rejected: 0, total: items.length + 1 },
    posts: [],
    rejectPlaces: new Set(),
  };

  const json = (body: unknown, status = 200, headers: Record<string, string> = {}) =>
    new Response(JSON.stringify(body), {
      status,
      headers: { 'Content-Type': 'application/json', ...headers },
    });

  const govVocab = ['Prodi II', 'Berlusconi IV', 'Monti'];

  vi.stubGlobal('fetch', async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const path = url.replace(/^https?:\/\/[^/]+/, '');
    if (path === '/api/schema') return json(schema);
    if (path.startsWith('/api/review?')) {
      const params = new URLSearchParams(path.split('?')[1]);
      const page = Number(params.get('page') ?? '1');
      const size = Number(params.get('size') ?? '20');
      const slice = service.pending.slice((page - 1) * size, page * size);
      return json(slice, 200, { 'X-Total-Count': String(service.pending.length) });
    }
    const single = path.match(/^\/api\/review\/(\d+)\/(\d+)$/);
    if (single && (!init || !init.method || init.method === 'GET')) {
      const found = service.pending.find(
        (i) => i.record_id === Number(single[1]) && i.ordinal === Number(single[2]),
      );
      return found ? json(found) : json({ error: 'unknown' }, 404);
    }
    if (single && init?.method === 'POST') {
      const body = JSON.parse(String(init.body));
      service.posts.push({ url: path, body });
      const key = [Number(single[1]), Number(single[2])] as const;
      const found = service.pending.find(
        (i) => i.record_id === key[0] && i.ordinal === key[1],
      );
      if (!found) return json({ error: 'unknown' }, 404);
      const errors: { path: string; message: string }[] = [];
      for (const a of body.assignments ?? []) {
        const joined = a.path.join('/');
        if (joined.endsWith('Goverment') && !govVocab.includes(a.value)) {
          errors.push({
            path: 'Internal Politics/Political Organizations/Goverment',
            message: `value ${JSON.stringify(a.value)} not in the closed vocabulary`,
          });
        }
        if (joined === 'Place' && service.rejectPlaces.has(a.value)) {
          errors.push({ path: 'Place', message: 'place is not allowed' });
        }
      }
      if (errors.length) return json({ errors }, 422);
      service.pending = service.pending.filter((i) => i !== found);
      const status = body.verdict === 'rejected' ? 'rejected' : 'resolved';
      service.progress.flagged -= 1;
      service.progress[status as 'resolved' | 'rejected'] += 1;
      return json({
        event: { ...found.event, status },
        progress: service.progress,
      });
    }
    if (path === '/api/progress') return json(service.progress);
    return json({ error: 'not found' }, 404);
  });
  return service;
}
