import { describe, expect, it } from "vitest"

import { ApiClient } from "../src/api.js"

function fetchStub(routes: Record<string, { status: number; body: unknown }[]>) {
    const counts: Record<string, number> = {}
    const calls: string[] = []
    const impl = async (url: string, init?: RequestInit) => {
        calls.push(`${init?.method ?? "GET"} ${url}`)
        const hits = routes[url]
        if (!hits) throw new Error(`no stub for ${url}`)
        const n = counts[url] ?? 0
        counts[url] = n + 1
        const hit = hits[Math.min(n, hits.length - 1)]
        return {
            ok: hit.status < 400,
            status: hit.status,
            json: async () => hit.body,
            text: async () => JSON.stringify(hit.body),
        } as Response
    }
    return { impl, calls }
}

describe("ApiClient", () => {
    it("creates sessions and encodes overrides as set=k:p/q", async () => {
        const { impl, calls } = fetchStub({
            "/api/tds": [{ status: 201, body: { id: "abc" } }],
            "/api/tds/abc/scene?set=1%3A-5%2F4": [{ status: 200, body: { layers: {}, orbits: [] } }],
        })
        const api = new ApiClient("", impl)
        const sid = await api.createFromPreset("autocatalator")
        expect(sid).toBe("abc")
        await api.getScene(sid, { 1: "-5/4" })
        expect(calls[1]).toContain("set=1%3A-5%2F4")
    })

    it("polls 202 job tokens until done", async () => {
        const { impl } = fetchStub({
            "/api/tds/abc/report": [{ status: 202, body: { status: "pending", token: "t1" } }],
            "/api/jobs/t1": [
                { status: 202, body: { status: "pending" } },
                { status: 200, body: { overall: "StructurallyStable" } },
            ],
        })
        const api = new ApiClient("", impl)
        const rep = await api.getReport("abc", {})
        expect(rep.overall).toBe("StructurallyStable")
    })

    it("raises on http errors with the body attached", async () => {
        const { impl } = fetchStub({
            "/api/tds/missing/scene": [{ status: 404, body: { error: "UnknownSession" } }],
        })
        const api = new ApiClient("", impl)
        await expect(api.getScene("missing", {})).rejects.toThrow(/404/)
    })
})
