/** Thin typed client for the review service. The UI talks to the backend
 * only through these six calls. */

import type { CodedEvent, FieldError, Progress, Resolution, ReviewItem, SchemaNode } from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    public errors: FieldError[] = [],
  ) {
    super(`request failed with ${status}`);
  }
}

async function getJson<T>(url: string): Promise<{ body: T; response: Response }> {
  const response = await fetch(url, { headers: { Accept: 'application/json' } });
  if (!response.ok) {
    throw new ApiError(response.status);
  }
  return { body: (await response.json()) as T, response };
}

export async function fetchSchema(): Promise<SchemaNode> {
  return (await getJson<SchemaNode>('/api/schema')).body;
}

export async function fetchPending(
  page: number,
  size: number,
): Promise<{ items: ReviewItem[]; total: number }> {
  const { body, response } = await getJson<ReviewItem[]>(`/api/review?page=${page}&size=${size}`);
  return { items: body, total: Number(response.headers.get('X-Total-Count') ?? body.length) };
}

export async function fetchItem(recordId: number, ordinal: number): Promise<ReviewItem> {
  return (await getJson<ReviewItem>(`/api/review/${recordId}/${ordinal}`)).body;
}

export async function fetchProgress(): Promise<Progress> {
  return (await getJson<Progress>('/api/progress')).body;
}

export async function postResolution(
  recordId: number,
  ordinal: number,
  resolution: Resolution,
): Promise<{ event: CodedEvent; progress: Progress }> {
  const response = await fetch(`/api/review/${recordId}/${ordinal}`, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(resolution),
  });
  if (response.status === 422) {
    const payload = (await response.json()) as { errors: FieldError[] };
    throw new ApiError(422, payload.errors);
  }
  if (!response.ok) {
    throw new ApiError(response.status);
  }
  return (await response.json()) as { event: CodedEvent; progress: Progress };
}
