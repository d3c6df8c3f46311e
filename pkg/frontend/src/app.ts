/** The review app: pending queue, schema-driven detail editor with mention
 * highlighting, and a polled progress bar. Plain DOM, no framework; the
 * server is the source of truth and every mutation round-trips through it. */

import { ApiError, fetchPending, fetchProgress, fetchSchema, postResolution } from './api';
import { controlFor, schemaFields, type FieldSpec } from './schemaForm';
import { validateForm } from './validate';
import type { Progress, ReviewItem, Verdict } from './types';

export interface AppOptions {
  /** Progress poll interval; 0 disables polling (tests drive refreshes). */
  pollMs?: number;
  pageSize?: number;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  node.append(...children);
  return node;
}

function truncate(text: string, limit = 90): string {
  return text.length <= limit ? text : text.slice(0, limit - 1) + '…';
}

/** Description with the mention span wrapped in <mark>. */
export function renderDescription(description: string, span: [number, number] | null): HTMLElement {
  const holder = el('p', { class: 'description' });
  if (!span) {
    holder.textContent = description;
    return holder;
  }
  const [start, end] = span;
  holder.append(
    description.slice(0, start),
    el('mark', {}, description.slice(start, end)),
    description.slice(end),
  );
  return holder;
}

export class App {
  private fields: FieldSpec[] = [];
  private queueBox: HTMLElement;
  private editorBox: HTMLElement;
  private progressBox: HTMLElement;
  private page = 1;
  private readonly pageSize: number;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private root: HTMLElement,
    options: AppOptions = {},
  ) {
    this.pageSize = options.pageSize ?? 20;
    this.progressBox = el('div', { id: 'progress' });
    this.queueBox = el('div', { id: 'queue' });
    this.editorBox = el('div', { id: 'editor' });
    root.replaceChildren(
      el('h1', {}, 'Review queue'),
      this.progressBox,
      this.queueBox,
      this.editorBox,
    );
    if (options.pollMs) {
      this.timer = setInterval(() => void this.refreshProgress(), options.pollMs);
    }
  }

  stop(): void {
    if (this.timer) clearInterval(this.timer);
  }

  async start(): Promise<void> {
    const schema = await fetchSchema();
    this.fields = schemaFields(schema);
    await Promise.all([this.refreshQueue(), this.refreshProgress()]);
  }

  async refreshProgress(): Promise<void> {
    this.renderProgress(await fetchProgress());
  }

  private renderProgress(progress: Progress): void {
    const bar = el('div', { class: 'bar' });
    for (const status of ['auto', 'flagged', 'resolved', 'rejected'] as const) {
      const share = progress.total ? (progress[status] / progress.total) * 100 : 0;
      bar.append(
        el('span', {
          class: `seg ${status}`,
          style: `width:${share}%`,
          title: `${status}: ${progress[status]}`,
        }),
      );
    }
    this.progressBox.replaceChildren(
      bar,
      el(
        'p',
        { class: 'counts' },
        `auto ${progress.auto} · flagged ${progress.flagged} · resolved ${progress.resolved}` +
          ` · rejected ${progress.rejected} · total ${progress.total}`,
      ),
    );
  }

  async refreshQueue(): Promise<void> {
    const { items, total } = await fetchPending(this.page, this.pageSize);
    const table = el('table', { class: 'pending' });
    table.append(
      el(
        'tr',
        {},
        ...['record', 'date', 'place', 'description', 'flags'].map((h) => el('th', {}, h)),
      ),
    );
    for (const item of items) {
      const row = el(
        'tr',
        { class: 'item', 'data-key': `${item.record_id}/${item.ordinal}` },
        el('td', {}, `${item.record_id}#${item.ordinal}`),
        el('td', {}, item.date ?? ''),
        el('td', {}, item.place ?? ''),
        el('td', {}, truncate(item.description)),
        el('td', {}, item.flags.join(', ')),
      );
      row.addEventListener('click', () => this.openEditor(item));
      table.append(row);
    }
    this.queueBox.replaceChildren(
      el('p', { class: 'total' }, `${total} pending`),
      items.length ? table : el('p', {}, 'Nothing waiting for review.'),
    );
  }

  private currentValues(item: ReviewItem): Map<string, string> {
    const values = new Map<string, string>();
    for (const field of this.fields) {
      const hit = item.event.assignments.find(
        (a) => a.path.length === field.path.length && a.path.every((s, i) => s === field.path[i]),
      );
      if (hit) values.set(field.key, hit.value);
    }
    return values;
  }

  openEditor(item: ReviewItem): void {
    const form = el('form', { class: 'editor', 'data-key': `${item.record_id}/${item.ordinal}` });
    form.append(
      el('h2', {}, `Record ${item.record_id}, actor ${item.ordinal}`),
      renderDescription(item.description, item.span),
      el('p', { class: 'flags' }, item.flags.length ? `flags: ${item.flags.join(', ')}` : ''),
    );

    const values = this.currentValues(item);
    for (const field of this.fields) {
      const kind = controlFor(field);
      const row = el('label', { class: 'field', 'data-field': field.key });
      row.append(el('span', { class: 'name' }, field.label));
      if (kind === 'select') {
        const select = el('select', { name: field.key });
        select.append(el('option', { value: '' }, '(unset)'));
        for (const option of field.vocabulary) {
          const opt = el('option', { value: option }, option);
          if (values.get(field.key) === option) opt.setAttribute('selected', '');
          select.append(opt);
        }
        row.append(select);
      } else {
        row.append(
          el('input', {
            name: field.key,
            type: kind === 'date' ? 'date' : 'text',
            value: values.get(field.key) ?? '',
          }),
        );
      }
      row.append(el('span', { class: 'error', 'data-error-for': field.key }));
      form.append(row);
    }

    const verdict = el('select', { name: 'verdict' });
    for (const option of ['corrected', 'accept_as_is', 'rejected'])
      verdict.append(el('option', { value: option }, option));
    const verifier = el('input', { name: 'verifier_id', type: 'text', placeholder: 'verifier id' });
    const problems = el('p', { class: 'form-errors' });
    form.append(
      el('label', { class: 'field' }, el('span', { class: 'name' }, 'verdict'), verdict),
      el('label', { class: 'field' }, el('span', { class: 'name' }, 'verifier'), verifier),
      problems,
      el('button', { type: 'submit' }, 'Submit resolution'),
    );

    form.addEventListener('submit', (ev) => {
      ev.preventDefault();
      void this.submit(item, form);
    });
    this.editorBox.replaceChildren(form);
  }

  private markErrors(form: HTMLFormElement, errors: Map<string, string>): void {
    for (const slot of form.querySelectorAll<HTMLElement>('[data-error-for]')) {
      const key = slot.getAttribute('data-error-for') ?? '';
      slot.textContent = errors.get(key) ?? '';
      slot.closest('.field')?.classList.toggle('invalid', errors.has(key));
    }
  }

  async submit(item: ReviewItem, form: HTMLFormElement): Promise<void> {
    const data = new FormData(form);
    const values = new Map<string, string>();
    for (const field of this.fields) values.set(field.key, String(data.get(field.key) ?? ''));

    const problems = validateForm(this.fields, values);
    this.markErrors(form, problems);
    if (problems.size) return;

    const verdict = String(data.get('verdict') || 'corrected') as Verdict;
    const original = this.currentValues(item);
    const assignments =
      verdict === 'corrected'
        ? this.fields
            .filter((f) => {
              const now = values.get(f.key) ?? '';
              return now !== '' && now !== (original.get(f.key) ?? '');
            })
            .map((f) => ({ path: f.path, value: values.get(f.key) ?? '' }))
        : [];
    try {
      const result = await postResolution(item.record_id, item.ordinal, {
        verdict,
        verifier_id: String(data.get('verifier_id') ?? ''),
        assignments,
      });
      this.renderProgress(result.progress);
      this.editorBox.replaceChildren(
        el('p', { class: 'done' }, `Recorded ${verdict} for ${item.record_id}#${item.ordinal}.`),
      );
      await this.refreshQueue();
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        const byField = new Map(err.errors.map((e) => [e.path, e.message]));
        this.markErrors(form, byField);
        const general = err.errors.filter((e) => !e.path).map((e) => e.message);
        form.querySelector('.form-errors')!.textContent = general.join('; ');
      } else {
        form.querySelector('.form-errors')!.textContent = `submission failed: ${String(err)}`;
      }
    }
  }
}

export async function startApp(root: HTMLElement, options: AppOptions = {}): Promise<App> {
  const app = new App(root, options);
  await app.start();
  return app;
}
