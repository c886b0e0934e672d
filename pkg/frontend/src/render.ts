// Canvas drawing of a scene under the published figure conventions: solid
// strokes for sliding edges, dashed for crossing and inert ones, flow-coded
// colors, white-disc singularities, little triangles marking the sliding
// sense on transversal nullcline edges, a labelled subdivision inset and the
// crossing graph in purple.

import { SceneJson, EdgeJson, OrbitJson } from "./api.js"
import { Viewport, worldToScreen } from "./state.js"

// the subset of CanvasRenderingContext2D the renderer touches; tests supply
// a recording fake
export interface Ctx2D {
    clearRect(x: number, y: number, w: number, h: number): void
    beginPath(): void
    moveTo(x: number, y: number): void
    lineTo(x: number, y: number): void
    arc(x: number, y: number, r: number, a0: number, a1: number): void
    closePath(): void
    stroke(): void
    fill(): void
    fillText(text: string, x: number, y: number): void
    setLineDash(segments: number[]): void
    strokeStyle: string
    fillStyle: string
    lineWidth: number
    font: string
    globalAlpha: number
}

const EDGE_STRONG = "#202020"
const EDGE_FAINT_U = "#4c82c8"
const EDGE_FAINT_V = "#d88"
const ORBIT_COLOR = "#d62728"
const GRAPH_COLOR = "#9467bd"

export function renderScene(scene: SceneJson | null, view: {
    viewport: Viewport
    visibleLayers: Set<string>
    orbits: { orbit: OrbitJson; badge: string }[]
}, ctx: Ctx2D): void {
    const vp = view.viewport
    ctx.clearRect(0, 0, vp.width, vp.height)
    if (!scene) return
    const curveStyles: [string, string][] = [["TU", EDGE_FAINT_U], ["TV", EDGE_FAINT_V], ["TI", EDGE_STRONG]]
    for (const [tag, color] of curveStyles) {
        if (!view.visibleLayers.has(tag)) continue
        const layer = (scene.layers as Record<string, unknown>)[tag] as
            | { edges: EdgeJson[]; vertices: { point: { xy: [number, number] } }[] }
            | undefined
        if (!layer) continue
        for (const e of layer.edges) {
            drawEdge(ctx, vp, e, color, tag === "TI")
        }
        if (tag === "TI") {
            ctx.fillStyle = EDGE_STRONG
            for (const v of layer.vertices) {
                dot(ctx, vp, v.point.xy, 2.5)
            }
        }
    }
    if (view.visibleLayers.has("regions")) {
        for (const r of scene.layers.regions ?? []) {
            if (!r.witness) continue
            const [x, y] = worldToScreen(vp, r.witness.xy[0], r.witness.xy[1])
            ctx.fillStyle = r.color
            ctx.font = "12px sans-serif"
            ctx.fillText(String(r.pair), x, y)
        }
    }
    for (const seeded of view.orbits) {
        drawOrbit(ctx, vp, seeded.orbit, seeded.badge)
    }
    if (view.visibleLayers.has("singularities")) {
        for (const s of scene.layers.singularities ?? []) {
            const [x, y] = worldToScreen(vp, s.point.xy[0], s.point.xy[1])
            ctx.beginPath()
            ctx.arc(x, y, 5, 0, Math.PI * 2)
            ctx.fillStyle = "white"
            ctx.fill()
            ctx.strokeStyle = "black"
            ctx.setLineDash([])
            ctx.lineWidth = 1.5
            ctx.stroke()
        }
    }
    if (view.visibleLayers.has("graph") && scene.graph) {
        drawGraphInset(ctx, vp, scene)
    }
    if (view.visibleLayers.has("subdivision") && scene.layers.subdivision) {
        drawSubdivisionInset(ctx, vp, scene)
    }
    if (view.visibleLayers.has("report") && scene.report) {
        ctx.fillStyle = scene.report.overall === "StructurallyStable" ? "#2a7" : "#c33"
        ctx.font = "13px sans-serif"
        ctx.fillText(`verdict: ${scene.report.overall}`, 12, vp.height - 12)
    }
}

function dot(ctx: Ctx2D, vp: Viewport, xy: [number, number], r: number): void {
    const [x, y] = worldToScreen(vp, xy[0], xy[1])
    ctx.beginPath()
    ctx.arc(x, y, r, 0, Math.PI * 2)
    ctx.fill()
}

function drawEdge(ctx: Ctx2D, vp: Viewport, e: EdgeJson, color: string, strong: boolean): void {
    const [x1, y1] = worldToScreen(vp, e.p1.xy[0], e.p1.xy[1])
    const [x2, y2] = worldToScreen(vp, e.p2.xy[0], e.p2.xy[1])
    ctx.strokeStyle = color
    ctx.lineWidth = strong ? 1.8 : 1.0
    ctx.setLineDash(e.style === "dashed" ? [6, 4] : [])
    ctx.beginPath()
    ctx.moveTo(x1, y1)
    ctx.lineTo(x2, y2)
    ctx.stroke()
    ctx.setLineDash([])
    if (strong && e.glyph === "nc-triangle") {
        const mx = (x1 + x2) / 2
        const my = (y1 + y2) / 2
        ctx.fillStyle = ORBIT_COLOR
        ctx.beginPath()
        ctx.moveTo(mx, my - 4)
        ctx.lineTo(mx - 4, my + 3)
        ctx.lineTo(mx + 4, my + 3)
        ctx.closePath()
        ctx.fill()
    }
}

function drawOrbit(ctx: Ctx2D, vp: Viewport, orbit: OrbitJson, badge: string): void {
    if (orbit.vertices.length === 0) return
    ctx.strokeStyle = ORBIT_COLOR
    ctx.lineWidth = 1.6
    ctx.setLineDash([])
    ctx.beginPath()
    const [x0, y0] = worldToScreen(vp, orbit.vertices[0].xy[0], orbit.vertices[0].xy[1])
    ctx.moveTo(x0, y0)
    for (const p of orbit.vertices.slice(1)) {
        const [x, y] = worldToScreen(vp, p.xy[0], p.xy[1])
        ctx.lineTo(x, y)
    }
    ctx.stroke()
    const last = orbit.vertices[orbit.vertices.length - 1]
    const [bx, by] = worldToScreen(vp, last.xy[0], last.xy[1])
    ctx.fillStyle = ORBIT_COLOR
    ctx.font = "11px sans-serif"
    ctx.fillText(badge, bx + 6, by - 6)
}

function drawGraphInset(ctx: Ctx2D, vp: Viewport, scene: SceneJson): void {
    const graph = scene.graph!
    const size = Math.min(vp.width, vp.height) * 0.22
    const pad = 10
    const xs = graph.nodes.map((n) => n[0][0])
    const ys = graph.nodes.map((n) => n[0][1])
    const lo = [Math.min(...xs), Math.min(...ys)]
    const hi = [Math.max(...xs), Math.max(...ys)]
    const span = Math.max(hi[0] - lo[0], hi[1] - lo[1], 1)
    const toInset = (d: [number, number]): [number, number] => [
        vp.width - pad - size + ((d[0] - lo[0]) / span) * size,
        pad + size - ((d[1] - lo[1]) / span) * size,
    ]
    ctx.strokeStyle = GRAPH_COLOR
    ctx.lineWidth = 1.2
    ctx.setLineDash([])
    for (const [a, b] of graph.arcs) {
        const [x1, y1] = toInset(a)
        const [x2, y2] = toInset(b)
        ctx.beginPath()
        ctx.moveTo(x1, y1)
        ctx.lineTo(x2, y2)
        ctx.stroke()
        // arrowhead
        const dx = x2 - x1
        const dy = y2 - y1
        const n = Math.hypot(dx, dy) || 1
        const ux = dx / n
        const uy = dy / n
        ctx.beginPath()
        ctx.moveTo(x2, y2)
        ctx.lineTo(x2 - 6 * ux + 3 * uy, y2 - 6 * uy - 3 * ux)
        ctx.lineTo(x2 - 6 * ux - 3 * uy, y2 - 6 * uy + 3 * ux)
        ctx.closePath()
        ctx.fillStyle = GRAPH_COLOR
        ctx.fill()
    }
    ctx.fillStyle = "#333"
    ctx.font = "10px sans-serif"
    for (const n of graph.nodes) {
        const [x, y] = toInset(n[0])
        ctx.fillText(`(${n[0][0]},${n[0][1]})`, x + 3, y - 3)
    }
}

function drawSubdivisionInset(ctx: Ctx2D, vp: Viewport, scene: SceneJson): void {
    const sub = scene.layers.subdivision?.SI
    if (!sub) return
    const size = Math.min(vp.width, vp.height) * 0.22
    const pad = 10
    const xs = sub.points.map((p) => p.degree[0])
    const ys = sub.points.map((p) => p.degree[1])
    const lo = [Math.min(...xs), Math.min(...ys)]
    const span = Math.max(Math.max(...xs) - lo[0], Math.max(...ys) - lo[1], 1)
    const toInset = (d: [number, number]): [number, number] => [
        pad + ((d[0] - lo[0]) / span) * size,
        vp.height - pad - ((d[1] - lo[1]) / span) * size,
    ]
    ctx.strokeStyle = "#555"
    ctx.lineWidth = 1
    ctx.setLineDash([])
    for (const face of sub.faces) {
        ctx.beginPath()
        const [x0, y0] = toInset(face[0])
        ctx.moveTo(x0, y0)
        for (const d of face.slice(1)) {
            const [x, y] = toInset(d)
            ctx.lineTo(x, y)
        }
        ctx.closePath()
        ctx.stroke()
    }
    ctx.fillStyle = "#333"
    ctx.font = "10px sans-serif"
    for (const p of sub.points) {
        const [x, y] = toInset(p.degree)
        ctx.fillText(`(${p.degree[0]},${p.degree[1]})`, x + 2, y - 2)
    }
}
