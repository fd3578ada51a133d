"""Data subject rights and their anchor queries.

Each right is anchored by the wording of the GDPR article granting it
(German, matching the corpus language). The anchor text is the query the
sentence embedder pulls right-bearing paragraphs towards.
"""

RIGHT_INFORMATION = "right_information"
RIGHT_DELETION = "right_deletion"
RIGHT_DATA_PORTABILITY = "right_data_portability"
RIGHT_WITHDRAW_CONSENT = "right_withdraw_consent"
RIGHT_COMPLAINT = "right_complaint"

RIGHTS = [
    RIGHT_INFORMATION,
    RIGHT_DELETION,
    RIGHT_DATA_PORTABILITY,
    RIGHT_WITHDRAW_CONSENT,
    RIGHT_COMPLAINT,
]

RIGHT_NAMES = {
    RIGHT_INFORMATION: "Right to Information",
    RIGHT_DELETION: "Right to Correction or Deletion",
    RIGHT_DATA_PORTABILITY: "Right to Data Portability",
    RIGHT_WITHDRAW_CONSENT: "Right to Withdraw Consent",
    RIGHT_COMPLAINT: "Right to Complaint",
}

ANCHOR_QUERIES = {
    RIGHT_INFORMATION: (
        "Die betroffene Person hat das Recht, von dem Verantwortlichen eine "
        "Bestätigung darüber zu verlangen, ob sie betreffende personenbezogene "
        "Daten verarbeitet werden; ist dies der Fall, so hat sie ein Recht auf "
        "Auskunft über diese personenbezogenen Daten sowie auf Informationen "
        "über die Verarbeitungszwecke, die Kategorien der Daten und die "
        "Empfänger, gegenüber denen die Daten offengelegt worden sind."
    ),
    RIGHT_DELETION: (
        "Die betroffene Person hat das Recht, von dem Verantwortlichen "
        "unverzüglich die Berichtigung sie betreffender unrichtiger "
        "personenbezogener Daten sowie die Löschung sie betreffender "
        "personenbezogener Daten zu verlangen, sofern einer der gesetzlichen "
        "Gründe zutrifft und soweit die Verarbeitung nicht erforderlich ist; "
        "der Verantwortliche ist verpflichtet, die Daten unverzüglich zu "
        "löschen."
    ),
    RIGHT_DATA_PORTABILITY: (
        "Die betroffene Person hat das Recht, die sie betreffenden "
        "personenbezogenen Daten, die sie einem Verantwortlichen "
        "bereitgestellt hat, in einem strukturierten, gängigen und "
        "maschinenlesbaren Format zu erhalten, und sie hat das Recht, diese "
        "Daten einem anderen Verantwortlichen ohne Behinderung zu "
        "übermitteln (Datenübertragbarkeit)."
    ),
    RIGHT_WITHDRAW_CONSENT: (
        "Die betroffene Person hat das Recht, ihre Einwilligung jederzeit zu "
        "widerrufen. Durch den Widerruf der Einwilligung wird die "
        "Rechtmäßigkeit der aufgrund der Einwilligung bis zum Widerruf "
        "erfolgten Verarbeitung nicht berührt. Die betroffene Person wird vor "
        "Abgabe der Einwilligung hiervon in Kenntnis gesetzt."
    ),
    RIGHT_COMPLAINT: (
        "Jede betroffene Person hat unbeschadet anderweitiger Rechtsbehelfe "
        "das Recht auf Beschwerde bei einer Aufsichtsbehörde, insbesondere in "
        "dem Mitgliedstaat ihres Aufenthaltsorts, ihres Arbeitsplatzes oder "
        "des Orts des mutmaßlichen Verstoßes, wenn sie der Ansicht ist, dass "
        "die Verarbeitung der sie betreffenden personenbezogenen Daten gegen "
        "die Verordnung verstößt."
    ),
}

GDPR_REFERENCES = {
    RIGHT_INFORMATION: "Art. 13(2b), 14(2c), 15(1) GDPR",
    RIGHT_DELETION: "Art. 13(2b), 14(2c), 15(1e) GDPR",
    RIGHT_DATA_PORTABILITY: "Art. 13(2b), 14(2c), 15(1e), 20 GDPR",
    RIGHT_WITHDRAW_CONSENT: "Art. 13(2c), 14(2d), 7(3) GDPR",
    RIGHT_COMPLAINT: "Art. 13(2d), 14(2e), 15(1f), 77 GDPR",
}
