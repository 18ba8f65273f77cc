/** Typed client for the game service JSON API. */

export interface Transition {
  src: string;
  label: string;
  dst?: string;
  weight?: string;
  terminate?: boolean;
}

export interface Verdict {
  x0: string;
  x1: string;
  bisimilar: boolean;
  separationRound: number | null;
}

export interface SystemInfo {
  sessionId: string;
  kind: "lts" | "pts";
  states: string[];
  alphabet: string[];
  transitions: Transition[];
  blocks: string[][];
  verdicts: Verdict[];
}

export type PhaseName =
  | "step1"
  | "step2"
  | "step3"
  | "step4"
  | "spoiler_won"
  | "duplicator_won";

export type Role = "spoiler" | "duplicator";

export interface Step3Hint {
  ell: number;
  state: string;
}

export interface GameStateJson {
  phase: PhaseName;
  position: [string, string];
  round: number;
  j: number | null;
  ell: number | null;
  pick: string | null;
  pendingPredicates: { p0: string[] | null; p1: string[] | null };
  legalHints: Step3Hint[] | string[];
  humanRole: Role;
  turn: Role | null;
  winner?: Role;
}

export interface EngineMove {
  phase: "step1" | "step2" | "step3" | "step4";
  j?: number;
  ell?: number;
  state?: string;
  predicate?: string[];
}

export interface GameResponse {
  gameId: string;
  state: GameStateJson;
  engineMoves: EngineMove[];
  winner?: Role;
  formula?: string;
}

export type MovePayload =
  | { phase: "step1"; payload: { j: number; predicate: string[] } }
  | { phase: "step2"; payload: { predicate: string[] } }
  | { phase: "step3"; payload: { ell: number; state: string } }
  | { phase: "step4"; payload: { state: string } };

/** Error carrying the server's reason for a rejected request. */
export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const body = await resp.json();
  if (!resp.ok) {
    const detail =
      typeof body?.detail === "string" ? body.detail : resp.statusText;
    throw new ApiError(resp.status, detail);
  }
  return body as T;
}

export class GameServiceClient {
  constructor(readonly baseUrl: string = "") {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return request<T>(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSystemFromCsv(csv: string): Promise<SystemInfo> {
    return this.post("/api/systems", { csv });
  }

  getSystem(sid: string): Promise<SystemInfo> {
    return request<SystemInfo>(`${this.baseUrl}/api/systems/${sid}`);
  }

  getFormula(
    sid: string,
    x0: string,
    x1: string,
    recode?: string,
  ): Promise<{ formula: string }> {
    const params = new URLSearchParams({ x0, x1 });
    if (recode) params.set("recode", recode);
    return request(`${this.baseUrl}/api/systems/${sid}/formula?${params}`);
  }

  createGame(
    sid: string,
    x0: string,
    x1: string,
    humanRole: Role,
  ): Promise<GameResponse> {
    return this.post(`/api/systems/${sid}/games`, { x0, x1, humanRole });
  }

  submitMove(sid: string, gid: string, move: MovePayload): Promise<GameResponse> {
    return this.post(`/api/systems/${sid}/games/${gid}/moves`, move);
  }

  getGame(sid: string, gid: string): Promise<GameResponse> {
    return request(`${this.baseUrl}/api/systems/${sid}/games/${gid}`);
  }
}
