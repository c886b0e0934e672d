// View-model for the explorer: coefficient overrides on a rational grid,
// viewport transforms, layer toggles, orbit bookkeeping and the bifurcation
// indicator. No geometry is computed here; every coordinate shown comes from
// server scene data.

import { ApiClient, OrbitJson, ReportJson, SceneJson } from "./api.js"

export const SLIDER_DENOMINATOR = 64
export const DEBOUNCE_MS = 150

const RATIONAL_RE = /^-?\d+(\/[1-9]\d*)?$/

export function isRationalString(s: string): boolean {
    return RATIONAL_RE.test(s.trim())
}

// exact "p/q" string for ticks/denominator, reduced
export function gridValue(ticks: number, denominator = SLIDER_DENOMINATOR): string {
    const g = gcd(Math.abs(ticks), denominator)
    const p = ticks / g
    const q = denominator / g
    return q === 1 ? `${p}` : `${p}/${q}`
}

function gcd(a: number, b: number): number {
    while (b) [a, b] = [b, a % b]
    return a || 1
}

export function rationalToNumber(s: string): number {
    const [p, q] = s.split("/")
    return Number(p) / (q ? Number(q) : 1)
}

export interface Viewport {
    centerU: number
    centerV: number
    scale: number   // pixels per phase-plane unit
    width: number
    height: number
}

export function worldToScreen(vp: Viewport, u: number, v: number): [number, number] {
    return [vp.width / 2 + (u - vp.centerU) * vp.scale,
            vp.height / 2 - (v - vp.centerV) * vp.scale]
}

export function screenToWorld(vp: Viewport, x: number, y: number): [number, number] {
    return [vp.centerU + (x - vp.width / 2) / vp.scale,
            vp.centerV - (y - vp.height / 2) / vp.scale]
}

export interface SeededOrbit {
    orbit: OrbitJson
    badge: string
}

export interface HoverReadout {
    exact: [string, string] | null
    text: string
}

type Scheduler = (fn: () => void, ms: number) => unknown
type Canceller = (handle: unknown) => void

export class ViewState {
    sessionId: string | null = null
    overrides: Record<number, string> = {}
    viewport: Viewport = { centerU: 0, centerV: 0, scale: 36, width: 640, height: 640 }
    visibleLayers: Set<string> = new Set(["TU", "TV", "TI", "regions", "singularities", "graph", "report"])
    orbits: SeededOrbit[] = []
    scene: SceneJson | null = null
    report: ReportJson | null = null
    hover: HoverReadout = { exact: null, text: "" }
    bifurcationIndicator = false
    lastError: string | null = null

    private seq = 0
    private appliedSeq = 0
    private pendingTimer: unknown = null
    private lastVerdict: string | null = null

    constructor(private api: ApiClient,
                private schedule: Scheduler = (fn, ms) => setTimeout(fn, ms),
                private cancel: Canceller = (h) => clearTimeout(h as number)) {}

    async loadPreset(name: string): Promise<void> {
        this.sessionId = await this.api.createFromPreset(name)
        this.overrides = {}
        this.orbits = []
        this.lastVerdict = null
        this.bifurcationIndicator = false
        await this.refetch()
    }

    toggleLayer(name: string): void {
        if (this.visibleLayers.has(name)) this.visibleLayers.delete(name)
        else this.visibleLayers.add(name)
    }

    // slider moves land on an exact rational grid so every probed value is
    // representable and cacheable server-side
    onSliderChange(pairIndex: number, ticks: number, denominator = SLIDER_DENOMINATOR): string | null {
        const value = gridValue(ticks, denominator)
        return this.setOverride(pairIndex, value)
    }

    setOverride(pairIndex: number, value: string): string | null {
        if (!isRationalString(value)) {
            return `not a rational: ${value}`
        }
        this.overrides[pairIndex] = value
        if (this.pendingTimer !== null) this.cancel(this.pendingTimer)
        this.pendingTimer = this.schedule(() => {
            this.pendingTimer = null
            void this.refetch()
        }, DEBOUNCE_MS)
        return null
    }

    async refetch(): Promise<void> {
        if (!this.sessionId) return
        const mySeq = ++this.seq
        try {
            const scene = await this.api.getScene(this.sessionId, this.overrides)
            if (mySeq < this.appliedSeq) return   // stale response: discard
            this.appliedSeq = mySeq
            this.scene = scene
            this.report = scene.report ?? null
            const verdict = this.report?.overall ?? null
            if (this.lastVerdict !== null && verdict !== null && verdict !== this.lastVerdict) {
                this.bifurcationIndicator = true
            }
            if (verdict !== null) this.lastVerdict = verdict
            this.lastError = null
        } catch (err) {
            if (mySeq >= this.appliedSeq) this.lastError = String(err)
        }
    }

    // click seeding: clamp to the clip box, post, append with a badge
    async onCanvasClick(x: number, y: number): Promise<SeededOrbit | null> {
        if (!this.sessionId || !this.scene) return null
        let [u, v] = screenToWorld(this.viewport, x, y)
        const [loU, hiU, loV, hiV] = this.scene.clip
        let clamped = false
        if (u < loU) { u = loU; clamped = true }
        if (u > hiU) { u = hiU; clamped = true }
        if (v < loV) { v = loV; clamped = true }
        if (v > hiV) { v = hiV; clamped = true }
        if (clamped) this.lastError = "seed clamped to the clip box"
        const start: [string, string] = [approxRational(u), approxRational(v)]
        return this.seedOrbit(start)
    }

    async seedOrbit(start: [string, string], direction: "Forward" | "Backward" = "Forward"):
            Promise<SeededOrbit | null> {
        if (!this.sessionId) return null
        try {
            const orbit = await this.api.postOrbit(this.sessionId, start, direction, this.overrides)
            const seeded = { orbit, badge: orbit.termination[0] }
            this.orbits.push(seeded)
            return seeded
        } catch (err) {
            this.lastError = String(err)
            return null
        }
    }

    updateHover(x: number, y: number): void {
        if (!this.scene) return
        const [u, v] = screenToWorld(this.viewport, x, y)
        let best: { exact: [string, string]; d: number } | null = null
        const consider = (p: { exact: [string, string]; xy: [number, number] }) => {
            const d = Math.hypot(p.xy[0] - u, p.xy[1] - v)
            if (best === null || d < best.d) best = { exact: p.exact, d }
        }
        for (const tag of ["TI", "TU", "TV"] as const) {
            const layer = this.scene.layers[tag]
            if (!layer) continue
            for (const vx of layer.vertices) consider(vx.point)
        }
        for (const s of this.scene.layers.singularities ?? []) consider(s.point)
        const chosen = best as { exact: [string, string]; d: number } | null
        if (chosen && chosen.d * this.viewport.scale < 12) {
            this.hover = { exact: chosen.exact, text: `(${chosen.exact[0]}, ${chosen.exact[1]})` }
        } else {
            this.hover = { exact: null, text: `(${u.toFixed(3)}, ${v.toFixed(3)})` }
        }
    }
}

// nearest grid rational with a small fixed denominator; used only to turn a
// mouse position into a seed the server can take exactly
export function approxRational(x: number, denominator = 1024): string {
    const p = Math.round(x * denominator)
    return gridValue(p, denominator)
}
