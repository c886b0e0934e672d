// Thin typed client for the analysis service. All coordinates arrive as
// exact rational strings plus float shadows; the client never computes
// geometry of its own.

export interface PointJson {
    exact: [string, string]
    xy: [number, number]
}

export interface EdgeJson {
    pair: [number, number]
    kind: string
    stability: string
    geom: string
    p1: PointJson
    p2: PointJson
    style: "solid" | "dashed"
    unbounded: boolean
    glyph?: string
}

export interface CurveLayer {
    edges: EdgeJson[]
    vertices: { point: PointJson; maximizers: number[] }[]
}

export interface RegionJson {
    pair: number
    flow: [number, number]
    color: string
    witness: PointJson | null
    empty: boolean
}

export interface SingularityJson {
    point: PointJson
    kind: string
    hosts: { U: number[]; V: number[] }
    glyph: string
}

export interface OrbitJson {
    start: PointJson
    orientation: string
    vertices: PointJson[]
    modes: [string, unknown][]
    directions: [string, string][]
    termination: string[]
}

export interface ReportJson {
    general_position: { gp1: boolean; gp2: boolean; gp3: boolean }
    singularities: [string, string][]
    cycles: [unknown[], string, string][]
    connections: [string, string, boolean][]
    overall: string
    witness: string | null
}

export interface GraphJson {
    nodes: [[number, number], [number, number], number][]
    arcs: [[number, number], [number, number]][]
    cycles: [number, number][][]
}

export interface SceneJson {
    alpha: Record<string, string | null>
    clip: [number, number, number, number]
    layers: {
        TU?: CurveLayer
        TV?: CurveLayer
        TI?: CurveLayer
        regions?: RegionJson[]
        singularities?: SingularityJson[]
        subdivision?: Record<string, { points: { degree: [number, number] }[]; faces: [number, number][][] }>
    }
    orbits: OrbitJson[]
    report?: ReportJson
    graph?: GraphJson
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>

export class ApiClient {
    constructor(private base: string, private fetchImpl: FetchLike = fetch.bind(globalThis)) {}

    private async json<T>(url: string, init?: RequestInit): Promise<T> {
        const res = await this.fetchImpl(this.base + url, init)
        if (!res.ok && res.status !== 202) {
            const body = await res.text()
            throw new Error(`${res.status}: ${body}`)
        }
        if (res.status === 202) {
            const { token } = (await res.json()) as { token: string }
            return this.poll<T>(token)
        }
        return (await res.json()) as T
    }

    private async poll<T>(token: string): Promise<T> {
        for (;;) {
            const res = await this.fetchImpl(`${this.base}/api/jobs/${token}`)
            if (res.status === 202) {
                await new Promise((r) => setTimeout(r, 150))
                continue
            }
            if (!res.ok) throw new Error(`job ${token} failed: ${res.status}`)
            return (await res.json()) as T
        }
    }

    async createSession(body: unknown): Promise<string> {
        const out = await this.json<{ id: string }>("/api/tds", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        })
        return out.id
    }

    createFromPreset(name: string): Promise<string> {
        return this.createSession({ preset: name })
    }

    getScene(sid: string, overrides: Record<number, string>, layers?: string[]): Promise<SceneJson> {
        const params = new URLSearchParams()
        for (const [k, v] of Object.entries(overrides)) params.append("set", `${k}:${v}`)
        if (layers && layers.length) params.set("layers", layers.join(","))
        const qs = params.toString()
        return this.json<SceneJson>(`/api/tds/${sid}/scene${qs ? "?" + qs : ""}`)
    }

    getReport(sid: string, overrides: Record<number, string>): Promise<ReportJson> {
        const params = new URLSearchParams()
        for (const [k, v] of Object.entries(overrides)) params.append("set", `${k}:${v}`)
        const qs = params.toString()
        return this.json<ReportJson>(`/api/tds/${sid}/report${qs ? "?" + qs : ""}`)
    }

    getGraph(sid: string): Promise<GraphJson> {
        return this.json<GraphJson>(`/api/tds/${sid}/graph`)
    }

    postOrbit(sid: string, start: [string, string], direction: "Forward" | "Backward",
              overrides: Record<number, string>, policy?: string): Promise<OrbitJson> {
        const sets = Object.entries(overrides).map(([k, v]) => `${k}:${v}`)
        return this.json<OrbitJson>(`/api/tds/${sid}/orbit`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ start, direction, set: sets, policy }),
        })
    }

    async presets(): Promise<string[]> {
        const out = await this.json<{ presets: string[] }>("/api/presets")
        return out.presets
    }
}
