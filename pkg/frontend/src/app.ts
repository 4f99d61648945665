// Console wiring: building setup form, schedule + what-if flow, and the
// polling dashboard. State lives on the server; reloading reproduces
// identical views.

import { ApiClient, ApiError, ScheduleResponse } from './api.js';
import {
  renderBlcResult, renderError, renderLedgerBadge, renderMetricsCards,
  renderScheduleDiff, renderScheduleSummary, renderTimeline,
} from './render.js';

const POLL_INTERVAL_MS = 5000;

const api = new ApiClient('', localStorage.getItem('memberKey')
                          ?? 'dev-member-key');

const $ = (id: string) => document.getElementById(id) as HTMLElement;
const val = (id: string) => ($(id) as unknown as HTMLInputElement).value;

let currentBuilding = '';
let lastSchedule: ScheduleResponse | null = null;

function showError(target: HTMLElement, err: unknown) {
  if (err instanceof ApiError) {
    target.innerHTML = renderError(err.status, err.body);
  } else {
    target.innerHTML = renderError(0, String(err));
  }
}

async function onRegisterBuilding() {
  const out = $('building-result');
  try {
    const resp = await api.registerBuilding({
      id: val('b-id') || undefined,
      construction_year: Number(val('b-year')),
      living_space_m2: Number(val('b-area')),
      desired_temp_c: Number(val('b-temp')),
      has_basement: (document.getElementById('b-basement') as HTMLInputElement).checked,
      roof_insulated: (document.getElementById('b-roof') as HTMLInputElement).checked,
    });
    currentBuilding = resp.building_id;
    out.innerHTML = renderBlcResult(resp.building_id, resp.blc);
  } catch (err) {
    showError(out, err);
  }
}

async function onSchedule(whatIf: boolean) {
  const out = $('schedule-result');
  try {
    const resp = await api.createSchedule(
      val('s-building') || currentBuilding, val('s-date'),
      Number(val('s-temp')));
    let html = renderScheduleSummary(resp) + renderTimeline(resp.slots);
    if (whatIf && lastSchedule) {
      html += '<h4>diff vs previous run</h4>'
        + renderScheduleDiff(lastSchedule.slots, resp.slots);
    }
    lastSchedule = resp;
    out.innerHTML = html;
  } catch (err) {
    showError(out, err);
  }
}

async function refreshDashboard() {
  const building = val('s-building') || currentBuilding;
  const date = val('s-date');
  if (building && date) {
    try {
      const m = await api.metrics(building, date);
      $('metrics').innerHTML = renderMetricsCards(m);
    } catch (err) {
      showError($('metrics'), err);
    }
  }
  try {
    $('ledger-status').innerHTML = renderLedgerBadge(await api.verifyLedger());
  } catch (err) {
    showError($('ledger-status'), err);
  }
}

export function start() {
  $('btn-register').addEventListener('click', () => void onRegisterBuilding());
  $('btn-schedule').addEventListener('click', () => void onSchedule(false));
  $('btn-whatif').addEventListener('click', () => void onSchedule(true));
  void refreshDashboard();
  setInterval(() => void refreshDashboard(), POLL_INTERVAL_MS);
}

if (typeof document !== 'undefined' && document.getElementById('btn-register')) {
  start();
}
