// Pure HTML renderers for the console views. Kept free of DOM and
// network access so they are unit-testable; app.ts wires them in.

import type { MetricsResponse, ScheduleResponse, VerifyResponse } from './api.js';

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

export function pct(x: number): string {
  const s = (x * 100).toFixed(1);
  return `${s === '-0.0' ? '0.0' : s}%`;
}

/** 24-cell timeline; on-hours highlighted, shaded by the share curve. */
export function renderTimeline(slots: boolean[], shares?: number[]): string {
  const cells = slots.map((on, hour) => {
    const share = shares?.[hour];
    const shade = share !== undefined
      ? ` style="--share:${share.toFixed(3)}"` : '';
    const title = share !== undefined
      ? ` title="h${hour}: share ${pct(share)}"` : ` title="h${hour}"`;
    return `<div class="cell${on ? ' on' : ''}"${shade}${title}>` +
           `${hour}</div>`;
  });
  return `<div class="timeline">${cells.join('')}</div>`;
}

export function renderScheduleSummary(s: ScheduleResponse): string {
  const parts = [
    `<span class="mono">${esc(s.slot_string)}</span>`,
    `operating hours: <b>${s.ehp_hours}</b>`,
  ];
  if (s.re_share_increase !== undefined) {
    parts.push(`predicted increase: <b>${pct(s.re_share_increase)}</b>`);
  }
  return `<p class="schedule-summary">${parts.join(' &middot; ')}</p>`;
}

/** Timeline diff for what-if reruns: hours that changed get a marker. */
export function renderScheduleDiff(before: boolean[], after: boolean[]): string {
  const cells = after.map((on, hour) => {
    const changed = before[hour] !== on;
    const cls = ['cell', on ? 'on' : '', changed ? 'changed' : '']
      .filter(Boolean).join(' ');
    return `<div class="${cls}" title="h${hour}${changed ? ' (changed)' : ''}">` +
           `${hour}</div>`;
  });
  return `<div class="timeline diff">${cells.join('')}</div>`;
}

export function renderMetricsCards(m: MetricsResponse): string {
  const prev = m.prev_day_re_share === null
    ? '&mdash;' : pct(m.prev_day_re_share);
  const onCount = m.slots.filter(Boolean).length;
  return `
  <div class="cards">
    <div class="card"><h3>Operational status</h3>
      <p>${onCount} of 24 hours on</p>${renderTimeline(m.slots)}</div>
    <div class="card"><h3>Previous-day renewable share</h3>
      <p class="big">${prev}</p></div>
    <div class="card"><h3>Renewable utilization increase</h3>
      <p class="big badge" id="increase-badge">${pct(m.re_share_increase)}</p></div>
  </div>`;
}

export function renderLedgerBadge(v: VerifyResponse): string {
  if (v.intact) {
    return `<span class="ledger-badge ok">ledger intact</span>`;
  }
  const at = v.height === null ? '' : ` at block ${v.height}`;
  return `<span class="ledger-badge corrupted">ledger corrupted${at}</span>`;
}

export function renderBlcResult(buildingId: string, blc: number): string {
  return `<p>Registered <b>${esc(buildingId)}</b> &mdash; ` +
         `derived retention coefficient <b>${blc.toFixed(2)}</b></p>`;
}

export function renderError(status: number, body: string): string {
  return `<p class="error">HTTP ${status}: ${esc(body)}</p>`;
}
