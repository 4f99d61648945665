// Typed client over the scheduling service's HTTP/JSON API.
// The console renders only what the server returns; no formulas are
// recomputed on the client.

export interface BuildingAttrs {
  id?: string;
  desired_temp_c?: number;
  construction_year: number;
  living_space_m2: number;
  has_basement: boolean;
  roof_insulated: boolean;
}

export interface BuildingResponse {
  building_id: string;
  blc: number;
}

export interface ScheduleResponse {
  building_id: string;
  date: string;
  slots: boolean[];
  slot_string: string;
  ehp_hours: number;
  forecast_digest: string;
  schedule_digest: string;
  re_share_increase?: number;
  baseline_share?: number;
  scheduled_share?: number;
}

export interface MetricsResponse {
  building_id: string;
  date: string;
  slots: boolean[];
  prev_day_re_share: number | null;
  re_share_increase: number;
}

export interface VerifyResponse {
  intact: boolean;
  height: number | null;
  detail: string;
}

export class ApiError extends Error {
  constructor(public status: number, public body: string) {
    super(`HTTP ${status}: ${body}`);
  }
}

export class ApiClient {
  constructor(private baseUrl: string, private memberKey: string) {}

  private async request<T>(method: string, path: string, body?: unknown,
                           contentType = 'application/json'): Promise<T> {
    const headers: Record<string, string> = { 'X-Member-Key': this.memberKey };
    let payload: string | undefined;
    if (body !== undefined) {
      headers['Content-Type'] = contentType;
      payload = contentType === 'application/json'
        ? JSON.stringify(body) : (body as string);
    }
    const resp = await fetch(this.baseUrl + path,
                             { method, headers, body: payload });
    const text = await resp.text();
    if (!resp.ok) throw new ApiError(resp.status, text);
    return JSON.parse(text) as T;
  }

  registerBuilding(attrs: BuildingAttrs): Promise<BuildingResponse> {
    return this.request('POST', '/api/buildings', attrs);
  }

  ingestForecast(csv: string): Promise<{ days: { date: string; digest: string }[] }> {
    return this.request('POST', '/api/forecasts', csv, 'text/csv');
  }

  registerDevice(doc: { building_id: string; base_url: string; key: string }):
      Promise<{ device_id: string }> {
    return this.request('POST', '/api/devices', doc);
  }

  createSchedule(buildingId: string, date: string, currentTempC: number):
      Promise<ScheduleResponse> {
    return this.request('POST', '/api/schedules?baseline=1', {
      building_id: buildingId, date, current_temp_c: currentTempC,
    });
  }

  metrics(buildingId: string, date: string): Promise<MetricsResponse> {
    return this.request('GET', `/api/metrics/${buildingId}/${date}`);
  }

  verifyLedger(): Promise<VerifyResponse> {
    return this.request('GET', '/api/ledger/verify');
  }
}
