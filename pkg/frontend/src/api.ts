/** Typed client for the comparison API.
 *
 * Each tab fetches on its own channel with latest-wins cancellation: issuing
 * a request aborts the channel's previous in-flight one, so stale responses
 * never overwrite fresh views. */

import type {
  InstitutionPayload,
  MetaPayload,
  MetricName,
  RankingTablePayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

export interface RankingParams {
  metric?: MetricName;
  direction?: "asc" | "desc";
  top?: number;
}

type FetchLike = (url: string, init?: { signal?: AbortSignal }) => Promise<Response>;

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (...args) => globalThis.fetch(...args),
  ) {}

  private async get<T>(channel: string, path: string): Promise<T> {
    this.inflight.get(channel)?.abort();
    const controller = new AbortController();
    this.inflight.set(channel, controller);
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, { signal: controller.signal });
    } catch (error) {
      if (controller.signal.aborted) throw error;
      throw new ApiError(0, "network failure");
    } finally {
      if (this.inflight.get(channel) === controller) {
        this.inflight.delete(channel);
      }
    }
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private static rankingQuery(params: RankingParams): string {
    const search = new URLSearchParams();
    if (params.metric) search.set("metric", params.metric);
    if (params.direction) search.set("direction", params.direction);
    if (params.top !== undefined) search.set("top", String(params.top));
    const text = search.toString();
    return text ? `&${text}` : "";
  }

  institutions(): Promise<InstitutionPayload[]> {
    return this.get("institutions", "/api/institutions");
  }

  institutionRanking(id: string, params: RankingParams = {}): Promise<RankingTablePayload> {
    const query = ApiClient.rankingQuery(params).replace(/^&/, "?");
    return this.get("institution", `/api/institutions/${encodeURIComponent(id)}/ranking${query}`);
  }

  thematic(
    query: string,
    exclude: readonly string[] = [],
    params: RankingParams = {},
  ): Promise<RankingTablePayload> {
    const q = encodeURIComponent(query);
    const ex = exclude.length ? `&exclude=${encodeURIComponent(exclude.join(","))}` : "";
    return this.get(
      "thematic",
      `/api/thematic?q=${q}${ex}${ApiClient.rankingQuery(params)}`,
    );
  }

  compare(ids: readonly string[], params: RankingParams = {}): Promise<RankingTablePayload> {
    return this.get(
      "compare",
      `/api/compare?ids=${encodeURIComponent(ids.join(","))}${ApiClient.rankingQuery(params)}`,
    );
  }

  meta(): Promise<MetaPayload> {
    return this.get("meta", "/api/meta");
  }
}
